#include "cutofflab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cutofflab/errors.hpp"

namespace cutofflab {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

LabError parse_error(std::size_t line, const std::string& what) {
  return LabError(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

bool parse_double(std::string_view token, double& out) {
  const std::string s(trim(token));
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool parse_index(std::string_view token, std::size_t& out) {
  const auto r = std::from_chars(token.data(), token.data() + token.size(), out);
  return r.ec == std::errc() && r.ptr == token.data() + token.size();
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    fn(++line_no, text.substr(pos, end - pos));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw parse_error(line_no, "unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

Cell cell_from_text(const std::string& s) {
  if (s.empty()) return std::monostate{};
  if (s == "true") return true;
  if (s == "false") return false;
  double v = 0.0;
  if (parse_double(s, v)) return v;
  return s;
}

Cell cell_from_json(const ordered_json& j) {
  if (j.is_null()) return std::monostate{};
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

std::string json_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(double v) const { return std::isfinite(v) ? format_number(v) : "null"; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return ordered_json(v).dump(); }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

RawMatrix parse_chain_text(std::string_view text) {
  RawMatrix raw;
  bool have_header = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto body = strip_comment(line);
    if (body.empty()) return;
    if (!have_header) {
      if (body.substr(0, 2) != "n=") throw parse_error(line_no, "expected header n=<int>");
      std::size_t n = 0;
      if (!parse_index(trim(body.substr(2)), n) || n == 0)
        throw parse_error(line_no, "bad state count '" + std::string(body.substr(2)) + "'");
      raw.n = n;
      have_header = true;
      return;
    }
    const auto tokens = split_ws(body);
    if (tokens.size() != 3) throw parse_error(line_no, "expected '<row> <col> <value>'");
    Triplet t{};
    if (!parse_index(tokens[0], t.row)) throw parse_error(line_no, "bad row index '" + std::string(tokens[0]) + "'");
    if (!parse_index(tokens[1], t.col)) throw parse_error(line_no, "bad column index '" + std::string(tokens[1]) + "'");
    if (!parse_double(tokens[2], t.value)) throw parse_error(line_no, "bad value '" + std::string(tokens[2]) + "'");
    if (t.row >= raw.n || t.col >= raw.n)
      throw parse_error(line_no, "index out of range for n=" + std::to_string(raw.n));
    raw.entries.push_back(t);
  });
  if (!have_header) throw LabError(ErrorCode::ParseError, "missing header n=<int>");
  return raw;
}

RawMatrix parse_chain_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto body = strip_comment(line);
    if (body.empty()) return;
    std::vector<double> row;
    for (const auto& field : split_csv_record(body, line_no)) {
      double v = 0.0;
      if (!parse_double(field, v)) throw parse_error(line_no, "bad value '" + field + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw parse_error(line_no, "expected " + std::to_string(rows.front().size()) + " values");
    rows.push_back(std::move(row));
  });
  if (rows.empty()) throw LabError(ErrorCode::ParseError, "empty matrix");
  if (rows.size() != rows.front().size())
    throw LabError(ErrorCode::ParseError, "matrix is " + std::to_string(rows.size()) + "x" +
                                              std::to_string(rows.front().size()) + ", not square");
  return RawMatrix::from_dense(rows);
}

RawMatrix read_chain_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LabError(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return path.extension() == ".csv" ? parse_chain_csv(buf.str()) : parse_chain_text(buf.str());
}

void write_chain_text(std::ostream& out, const Chain& chain) {
  out << "n=" << chain.size() << '\n';
  char buf[64];
  for (State x = 0; x < chain.size(); ++x)
    for (const auto& e : chain.row(x)) {
      std::snprintf(buf, sizeof buf, "%.17g", e.value);
      out << x << ' ' << e.col << ' ' << buf << '\n';
    }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string render_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw LabError(ErrorCode::InvalidParams, "row has " + std::to_string(row.size()) + " cells, expected " +
                                                 std::to_string(columns_.size()));
  rows_.push_back(std::move(row));
}

void Table::write(std::ostream& out, OutputFormat format) const {
  switch (format) {
    case OutputFormat::Csv: {
      for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << csv_escape(columns_[c]);
      out << '\n';
      for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(render_cell(row[c]));
        out << '\n';
      }
      break;
    }
    case OutputFormat::JsonLines: {
      for (const auto& row : rows_) {
        out << '{';
        for (std::size_t c = 0; c < row.size(); ++c)
          out << (c ? "," : "") << ordered_json(columns_[c]).dump() << ':' << json_cell(row[c]);
        out << "}\n";
      }
      break;
    }
    case OutputFormat::Table: {
      std::vector<std::size_t> width(columns_.size());
      std::vector<std::vector<std::string>> text;
      for (std::size_t c = 0; c < columns_.size(); ++c) width[c] = columns_[c].size();
      for (const auto& row : rows_) {
        auto& line = text.emplace_back();
        for (std::size_t c = 0; c < row.size(); ++c) {
          line.push_back(render_cell(row[c]));
          width[c] = std::max(width[c], line.back().size());
        }
      }
      auto emit = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (c) line += "  ";
          line += cells[c];
          if (c + 1 < cells.size()) line.append(width[c] - cells[c].size(), ' ');
        }
        out << line << '\n';
      };
      emit(columns_);
      for (const auto& line : text) emit(line);
      break;
    }
  }
}

Table parse_table(std::string_view text, OutputFormat format) {
  if (format == OutputFormat::Table)
    throw LabError(ErrorCode::InvalidParams, "the human table format is not machine-readable");
  std::optional<Table> table;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty()) return;
    if (format == OutputFormat::Csv) {
      auto fields = split_csv_record(line, line_no);
      if (!table) {
        table.emplace(std::move(fields));
        return;
      }
      std::vector<Cell> row;
      for (const auto& f : fields) row.push_back(cell_from_text(f));
      if (row.size() != table->columns().size()) throw parse_error(line_no, "wrong field count");
      table->add_row(std::move(row));
      return;
    }
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(line_no, e.what());
    }
    if (!j.is_object()) throw parse_error(line_no, "expected an object");
    std::vector<std::string> cols;
    std::vector<Cell> row;
    for (const auto& [key, value] : j.items()) {
      cols.push_back(key);
      row.push_back(cell_from_json(value));
    }
    if (!table) table.emplace(cols);
    if (cols != table->columns()) throw parse_error(line_no, "keys differ from the first record");
    table->add_row(std::move(row));
  });
  if (!table) throw LabError(ErrorCode::ParseError, "empty table");
  return std::move(*table);
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    double v = 0.0;
    const auto token = text.substr(pos, end - pos);
    if (!parse_double(token, v))
      throw LabError(ErrorCode::ParseError, "bad number '" + std::string(trim(token)) + "' in list");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace cutofflab
