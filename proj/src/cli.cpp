#include "cutofflab/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cutofflab/analyzer.hpp"
#include "cutofflab/bounds.hpp"
#include "cutofflab/errors.hpp"
#include "cutofflab/families.hpp"
#include "cutofflab/info_stats.hpp"
#include "cutofflab/model.hpp"
#include "cutofflab/parallel.hpp"

namespace cutofflab {
namespace {

using json = nlohmann::ordered_json;

std::string format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::JsonLines: return "json";
    case OutputFormat::Table: break;
  }
  return "table";
}

OutputFormat parse_format(const std::string& s) {
  if (s == "table") return OutputFormat::Table;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::JsonLines;
  throw LabError(ErrorCode::ParseError, "unknown output format '" + s + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LabError(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::size_t> parse_index_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  for (double v : parse_number_list(text)) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15)
      throw LabError(ErrorCode::ParseError, std::string(what) + " must be nonnegative integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

Cell num(double v) { return v; }
Cell integer(std::size_t v) { return static_cast<long long>(v); }
Cell opt(const std::optional<double>& v) { return v ? Cell(*v) : Cell(std::monostate{}); }

FamilySpec family_spec(const RunConfig& c) {
  const auto id = parse_family_name(c.family);
  if (!id) throw LabError(ErrorCode::InvalidParams, "unknown family '" + c.family + "'");
  FamilySpec spec;
  spec.family = *id;
  spec.size = c.size;
  spec.laziness = c.laziness;
  spec.degree = c.degree;
  spec.density = c.density;
  spec.seed = c.seed;
  if (!c.edges.empty()) spec.edges = parse_edge_list(read_file(c.edges));
  if (spec.family == FamilyId::SrwFromEdgelist && c.edges.empty())
    throw LabError(ErrorCode::InvalidParams, "family srw-from-edgelist needs --edges");
  return spec;
}

Chain load_chain(const RunConfig& c) {
  if (!c.chain.empty() && !c.family.empty())
    throw LabError(ErrorCode::InvalidParams, "give either a chain file or --family, not both");
  if (!c.chain.empty()) {
    ValidateOptions v;
    v.renormalize = c.renormalize;
    return validate_chain(read_chain_file(c.chain), v);
  }
  if (!c.family.empty()) return generate(family_spec(c));
  throw LabError(ErrorCode::InvalidParams, "no chain given (file argument or --family)");
}

StatsOptions stats_options(const RunConfig& c, const ChainModel& model) {
  StatsOptions s = default_stats_options(model);
  if (c.heat_tol) s.heat.tol = *c.heat_tol;
  if (c.t_tol) s.t_tol = *c.t_tol;
  for (auto o : c.origins)
    if (o >= model.size())
      throw LabError(ErrorCode::InvalidParams, "origin " + std::to_string(o) + " out of range");
  s.origins = c.origins;
  return s;
}

void write_plot(const std::string& dir, const std::string& name, const Table& table) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / (name + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LabError(ErrorCode::InvalidParams, "cannot write " + path.string());
  table.write(out, OutputFormat::Csv);
}

std::string eps_label(double e) { return format_number(e); }

int cmd_validate(const RunConfig& c, std::ostream& out) {
  const Chain chain = load_chain(c);
  const ChainMetrics m = chain_metrics(chain, c.dense_limit);
  Table t({"valid", "n", "nonzeros", "delta", "diameter", "symmetric_support", "irreducible"});
  t.add_row({true, integer(chain.size()), integer(chain.nonzeros()), num(m.delta), integer(m.diameter), true, true});
  t.write(out, c.format);
  return kExitOk;
}

int cmd_profile(const RunConfig& c, std::ostream& out) {
  const ChainModel model = build_model(load_chain(c), c.dense_limit);
  StatsOptions s = stats_options(c, model);
  s.heat = log_accurate(model, s.heat);

  std::vector<double> times = c.times;
  if (times.empty()) {
    const double lo = model.spectral.diameter / 4.0;
    const double hi = std::max(2.0 * mixing_time_upper_bound(model, 0.25), 2.0 * lo);
    for (int i = 0; i < 64; ++i) times.push_back(lo * std::pow(hi / lo, i / 63.0));
  }
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t)) throw LabError(ErrorCode::InvalidParams, "times must be finite and >= 0");

  Table table({"t", "dtv", "dkl", "vkl", "argmax_tv", "argmax_kl", "argmax_vkl"});
  for (double t : times) {
    const ProfilePoint p = worst_case_profile(model, t, s);
    table.add_row({num(p.t), num(p.dtv), num(p.dkl), num(p.vkl), integer(p.argmax_tv), integer(p.argmax_kl),
                   integer(p.argmax_vkl)});
  }
  table.write(out, c.format);

  if (!c.plot_data.empty()) {
    for (std::size_t col = 1; col <= 3; ++col) {
      Table curve({"t", table.columns()[col]});
      for (const auto& row : table.rows()) curve.add_row({row[0], row[col]});
      write_plot(c.plot_data, table.columns()[col], curve);
    }
  }
  return kExitOk;
}

int cmd_mixing_time(const RunConfig& c, std::ostream& out) {
  const ChainModel model = build_model(load_chain(c), c.dense_limit);
  const StatsOptions s = stats_options(c, model);
  const auto eps = c.epsilons.empty() ? std::vector<double>{0.25} : c.epsilons;
  Table table({"epsilon", "t_mix", "bracket_width", "dtv_at_t"});
  for (double e : eps) {
    const MixingTimeResult r = mixing_time(model, e, s);
    table.add_row({num(r.epsilon), num(r.t_mix), num(r.bracket_width), num(r.dtv_at_t)});
  }
  table.write(out, c.format);
  return kExitOk;
}

Table report_table(const std::vector<BoundReport>& reports) {
  Table table({"bound_id", "t", "s", "epsilon", "theta", "origin", "lhs", "rhs", "slack", "status", "pass",
               "preconditions_met", "reason", "note"});
  for (const auto& r : reports) {
    const Cell origin = r.inputs.origin ? integer(*r.inputs.origin) : Cell(std::monostate{});
    table.add_row({std::string(bound_name(r.id)), opt(r.inputs.t), opt(r.inputs.s), opt(r.inputs.epsilon),
                   opt(r.inputs.theta), origin, num(r.lhs), num(r.rhs), num(r.slack),
                   std::string(status_name(r.status)), r.passed(), r.preconditions_met, r.reason, r.note});
  }
  return table;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ChainModel model = build_model(load_chain(c), c.dense_limit);
  CheckOptions check = default_check_options(model);
  check.stats = stats_options(c, model);
  if (c.slack_tol) check.slack_tol = *c.slack_tol;
  VerifyGrid grid;
  grid.times = c.times;
  grid.shifts = c.shifts;
  grid.thetas = c.thetas;
  grid.window_epsilons = c.window_epsilons;
  grid.mixing_epsilons = c.epsilons;

  const auto reports = verify_all(model, grid, check);
  report_table(reports).write(out, c.format);
  const VerifySummary sum = summarize(reports);
  std::ostringstream line;
  line << "passed=" << sum.passed << " failed=" << sum.failed << " skipped=" << sum.skipped;
  if (c.format == OutputFormat::Table) out << '\n' << line.str() << '\n';
  err << line.str() << '\n';
  return sum.failed > 0 || (c.strict && sum.skipped > 0) ? kExitCheck : kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.family.empty()) throw LabError(ErrorCode::InvalidParams, "sweep needs --family");
  if (!c.chain.empty()) throw LabError(ErrorCode::InvalidParams, "sweep takes no chain file");
  if (c.sizes.empty()) throw LabError(ErrorCode::InvalidParams, "sweep needs --sizes");
  SweepOptions so;
  if (!c.epsilons.empty()) so.epsilons = c.epsilons;
  so.heat_tol = c.heat_tol;
  if (c.t_tol) so.t_tol = *c.t_tol;
  if (c.slack_tol) so.slack_tol = *c.slack_tol;
  so.dense_limit = c.dense_limit;

  const auto records = sweep(family_spec(c), c.sizes, so);

  std::vector<std::string> cols{"size", "states", "ok", "error", "gamma", "phi", "phi_exact",
                                "delta", "p_min", "diameter"};
  for (double e : so.epsilons) {
    cols.push_back("t_mix@" + eps_label(e));
    cols.push_back("vkl@" + eps_label(e));
    cols.push_back("vc@" + eps_label(e));
  }
  std::vector<double> window_eps;
  for (const auto& r : records)
    if (r.ok) {
      window_eps = r.window_epsilons;
      break;
    }
  for (double e : window_eps) {
    cols.push_back("window@" + eps_label(e));
    cols.push_back("cutoff_ratio@" + eps_label(e));
    cols.push_back("window_bound@" + eps_label(e));
  }
  cols.push_back("window_ratio");

  bool bound_failed = false;
  Table table(cols);
  for (const auto& r : records) {
    std::vector<Cell> row{integer(r.size), integer(r.states), r.ok, r.error};
    if (!r.ok) {
      row.resize(cols.size());
      table.add_row(std::move(row));
      continue;
    }
    for (Cell v : {num(r.gamma), num(r.phi), Cell(r.phi_exact), num(r.delta), num(r.p_min), integer(r.diameter)})
      row.push_back(v);
    for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
      row.push_back(num(r.t_mix[i]));
      row.push_back(num(r.vkl_at_t_mix[i]));
      row.push_back(num(r.vc_statistic[i]));
    }
    for (std::size_t i = 0; i < r.window_epsilons.size(); ++i) {
      row.push_back(num(r.window[i]));
      row.push_back(num(r.cutoff_ratio[i]));
      row.push_back(std::string(status_name(r.window_reports[i].status)));
      bound_failed |= r.window_reports[i].status == BoundStatus::Fail;
    }
    row.push_back(num(r.window_ratio));
    table.add_row(std::move(row));
  }
  table.write(out, c.format);

  std::optional<Table> verdict_table;
  try {
    const TrendVerdict v = verdict(records);
    Table vt({"verdict", "window_slope", "vc_slope", "window_decreasing", "vc_increasing", "window_flat",
              "vc_flat", "a1_holds", "a2_holds", "min_delta", "min_gamma"});
    vt.add_row({std::string(verdict_name(v.verdict)), num(v.window_slope), num(v.vc_slope), v.window_decreasing,
                v.vc_increasing, v.window_flat, v.vc_flat, v.a1_holds, v.a2_holds, num(v.min_delta),
                num(v.min_gamma)});
    verdict_table = std::move(vt);
  } catch (const LabError& e) {
    if (e.code() != ErrorCode::InvalidParams) throw;
    err << "no verdict: " << e.what() << '\n';
  }
  if (verdict_table) {
    if (c.format != OutputFormat::JsonLines) out << '\n';
    verdict_table->write(out, c.format);
  }

  if (!c.plot_data.empty()) {
    Table wr({"n", "window_ratio"});
    std::vector<std::string> vc_cols{"n"};
    for (double e : so.epsilons) vc_cols.push_back("vc@" + eps_label(e));
    Table vc(vc_cols);
    for (const auto& r : records) {
      if (!r.ok) continue;
      wr.add_row({integer(r.states), num(r.window_ratio)});
      std::vector<Cell> row{integer(r.states)};
      for (double x : r.vc_statistic) row.push_back(num(x));
      vc.add_row(std::move(row));
    }
    write_plot(c.plot_data, "window_ratio", wr);
    write_plot(c.plot_data, "vc_statistic", vc);
  }
  return bound_failed ? kExitCheck : kExitOk;
}

int cmd_generate(const RunConfig& c, std::ostream& out) {
  if (c.family.empty()) throw LabError(ErrorCode::InvalidParams, "generate needs --family");
  const Chain chain = generate(family_spec(c));
  if (c.output.empty() || c.output == "-") {
    write_chain_text(out, chain);
    return kExitOk;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file) throw LabError(ErrorCode::InvalidParams, "cannot write " + c.output);
  write_chain_text(file, chain);
  return kExitOk;
}

void report_error(const RunConfig& c, std::ostream& out, std::ostream& err, std::string_view code,
                  const std::string& message) {
  err << "error: " << message << '\n';
  if (c.format == OutputFormat::JsonLines) {
    json j;
    j["error"] = code;
    j["message"] = message;
    out << j.dump() << '\n';
  }
}

}  // namespace

std::string config_to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["chain"] = c.chain;
  j["family"] = c.family;
  j["size"] = c.size;
  j["sizes"] = c.sizes;
  j["laziness"] = c.laziness ? json(*c.laziness) : json(nullptr);
  j["degree"] = c.degree;
  j["density"] = c.density;
  j["seed"] = c.seed;
  j["edges"] = c.edges;
  j["epsilons"] = c.epsilons;
  j["times"] = c.times;
  j["shifts"] = c.shifts;
  j["thetas"] = c.thetas;
  j["window_epsilons"] = c.window_epsilons;
  j["origins"] = c.origins;
  j["heat_tol"] = c.heat_tol ? json(*c.heat_tol) : json(nullptr);
  j["t_tol"] = c.t_tol ? json(*c.t_tol) : json(nullptr);
  j["slack_tol"] = c.slack_tol ? json(*c.slack_tol) : json(nullptr);
  j["dense_limit"] = c.dense_limit;
  j["threads"] = c.threads;
  j["renormalize"] = c.renormalize;
  j["strict"] = c.strict;
  j["format"] = format_name(c.format);
  j["output"] = c.output;
  j["plot_data"] = c.plot_data;
  return j.dump(2);
}

RunConfig config_from_json(const std::string& text) {
  RunConfig c;
  try {
    const json j = json::parse(text);
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    auto get_opt = [&](const char* key, std::optional<double>& field) {
      if (j.contains(key) && !j.at(key).is_null()) field = j.at(key).get<double>();
    };
    get("command", c.command);
    get("chain", c.chain);
    get("family", c.family);
    get("size", c.size);
    get("sizes", c.sizes);
    get_opt("laziness", c.laziness);
    get("degree", c.degree);
    get("density", c.density);
    get("seed", c.seed);
    get("edges", c.edges);
    get("epsilons", c.epsilons);
    get("times", c.times);
    get("shifts", c.shifts);
    get("thetas", c.thetas);
    get("window_epsilons", c.window_epsilons);
    get("origins", c.origins);
    get_opt("heat_tol", c.heat_tol);
    get_opt("t_tol", c.t_tol);
    get_opt("slack_tol", c.slack_tol);
    get("dense_limit", c.dense_limit);
    get("threads", c.threads);
    get("renormalize", c.renormalize);
    get("strict", c.strict);
    std::string format = "table";
    get("format", format);
    c.format = parse_format(format);
    get("output", c.output);
    get("plot_data", c.plot_data);
  } catch (const nlohmann::json::exception& e) {
    throw LabError(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  return c;
}

int run_config(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    set_thread_count(c.threads);
    if (c.command == "validate") return cmd_validate(c, out);
    if (c.command == "profile") return cmd_profile(c, out);
    if (c.command == "mixing-time") return cmd_mixing_time(c, out);
    if (c.command == "verify") return cmd_verify(c, out, err);
    if (c.command == "sweep") return cmd_sweep(c, out, err);
    if (c.command == "generate") return cmd_generate(c, out);
    throw LabError(ErrorCode::InvalidParams, "unknown command '" + c.command + "'");
  } catch (const LabError& e) {
    report_error(c, out, err, error_name(e.code()), e.what());
    return is_input_error(e.code()) ? kExitInput : kExitNumerical;
  } catch (const std::exception& e) {
    report_error(c, out, err, "InternalError", e.what());
    return kExitNumerical;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical lab for the cutoff phenomenon in finite Markov chains", "cutofflab"};
  app.require_subcommand(0, 1);

  RunConfig c;
  std::string config_path, save_config;
  std::string sizes, eps, times, shifts, thetas, window_eps, origins;
  bool as_json = false, as_csv = false;

  app.add_option("--config", config_path, "Run a stored RunConfig (JSON); other options are ignored");

  auto common = [&](CLI::App* sub, bool chain_input) {
    if (chain_input) {
      sub->add_option("chain", c.chain, "Chain file (triplets, or dense .csv)");
      sub->add_flag("--renormalize", c.renormalize, "Rescale rows whose sum is off by at most 1e-9");
    }
    sub->add_option("--family", c.family,
                    "lazy-two-state | cycle | complete | hypercube | random-regular | random-symmetric | "
                    "srw-from-edgelist");
    sub->add_option("--size", c.size, "Family size (hypercube: dimension)");
    sub->add_option("--laziness", c.laziness, "Holding probability mixed into the family chain");
    sub->add_option("--degree", c.degree, "random-regular degree");
    sub->add_option("--density", c.density, "random-symmetric edge density");
    sub->add_option("--seed", c.seed, "Seed for the random families");
    sub->add_option("--edges", c.edges, "Edge-list file for srw-from-edgelist");
    sub->add_option("--heat-tol", c.heat_tol, "Heat-kernel truncation tolerance");
    sub->add_option("--t-tol", c.t_tol, "Mixing-time bisection tolerance");
    sub->add_option("--slack-tol", c.slack_tol, "Relative slack tolerance of the bound checks");
    sub->add_option("--dense-limit", c.dense_limit, "Largest n handled by the dense solvers");
    sub->add_option("--origins", origins, "Comma-separated origin subset");
    sub->add_option("--threads", c.threads, "Worker thread cap (default: CUTOFFLAB_THREADS)");
    sub->add_flag("--json", as_json, "One JSON object per line");
    sub->add_flag("--csv", as_csv, "Comma-separated values");
    sub->add_option("--save-config", save_config, "Write the resolved RunConfig to this file");
  };

  auto* validate = app.add_subcommand("validate", "Parse and validate a chain, print its metrics");
  common(validate, true);

  auto* profile = app.add_subcommand("profile", "Worst-case d_TV, d_KL, V_KL over a time grid");
  common(profile, true);
  profile->add_option("--times", times, "Comma-separated times (default: 64 log-spaced points)");
  profile->add_option("--plot-data", c.plot_data, "Directory for one CSV per curve");

  auto* mixing = app.add_subcommand("mixing-time", "Mixing times by bisection");
  common(mixing, true);
  mixing->add_option("--eps", eps, "Comma-separated epsilons (default 0.25)");

  auto* verify = app.add_subcommand("verify", "Check every bound over the evaluation grid");
  common(verify, true);
  verify->add_option("--times", times, "Time grid override");
  verify->add_option("--shifts", shifts, "Shift grid override");
  verify->add_option("--thetas", thetas, "Theta grid override");
  verify->add_option("--window-eps", window_eps, "Window-bound epsilons override");
  verify->add_option("--eps", eps, "Mixing-time epsilons override");
  verify->add_flag("--strict", c.strict, "Treat SKIPPED reports as failures");

  auto* sweep_cmd = app.add_subcommand("sweep", "Analyze a family over increasing sizes");
  common(sweep_cmd, false);
  sweep_cmd->add_option("--sizes", sizes, "Comma-separated, strictly increasing sizes")->required();
  sweep_cmd->add_option("--eps", eps, "Epsilon grid (default 0.25,0.5,0.75)");
  sweep_cmd->add_option("--plot-data", c.plot_data, "Directory for one CSV per curve");

  auto* gen = app.add_subcommand("generate", "Write a family member to a chain file");
  common(gen, false);
  gen->add_option("-o,--output", c.output, "Output path (default stdout)");

  std::vector<std::string> argv_store{"cutofflab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (!config_path.empty()) {
      c = config_from_json(read_file(config_path));
    } else {
      const auto subs = app.get_subcommands();
      if (subs.empty()) throw LabError(ErrorCode::InvalidParams, "a command is required (see --help)");
      c.command = subs.front()->get_name();
      if (as_json && as_csv) throw LabError(ErrorCode::InvalidParams, "--json and --csv are exclusive");
      c.format = as_json ? OutputFormat::JsonLines : as_csv ? OutputFormat::Csv : OutputFormat::Table;
      if (!sizes.empty()) c.sizes = parse_index_list(sizes, "sizes");
      if (!origins.empty()) c.origins = parse_index_list(origins, "origins");
      if (!eps.empty()) c.epsilons = parse_number_list(eps);
      if (!times.empty()) c.times = parse_number_list(times);
      if (!shifts.empty()) c.shifts = parse_number_list(shifts);
      if (!thetas.empty()) c.thetas = parse_number_list(thetas);
      if (!window_eps.empty()) c.window_epsilons = parse_number_list(window_eps);
    }
    if (!save_config.empty()) {
      std::ofstream file(save_config, std::ios::binary);
      if (!file) throw LabError(ErrorCode::InvalidParams, "cannot write " + save_config);
      file << config_to_json(c) << '\n';
    }
  } catch (const LabError& e) {
    report_error(c, out, err, error_name(e.code()), e.what());
    return kExitInput;
  }
  return run_config(c, out, err);
}

}  // namespace cutofflab
