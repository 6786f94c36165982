#include "alift/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace alift {

namespace {

using nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings everywhere
  if (!out) throw ValidationError("cannot open " + path.string() +
                                  " for writing");
  return out;
}

double parse_double(const std::string& field) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &pos);
  } catch (const std::exception&) {
    throw SchemaMismatchError("bad numeric field '" + field + "'");
  }
  if (pos != field.size()) {
    throw SchemaMismatchError("bad numeric field '" + field + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ValidationError("empty table");
  const auto cols = rows.front().size();
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw ValidationError("ragged table at row " + std::to_string(r));
    }
    for (size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return m;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Matrix read_table_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    for (const std::string& field : split_csv_line(line)) {
      row.push_back(parse_double(field));
    }
    rows.push_back(std::move(row));
  }
  return rows_to_matrix(rows);
}

Matrix read_table_csv_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_table_csv(in);
}

void write_table_csv(std::ostream& out, const Matrix& table) {
  for (Index r = 0; r < table.rows(); ++r) {
    for (Index c = 0; c < table.cols(); ++c) {
      if (c) out << ',';
      out << format_double(table(r, c));
    }
    out << '\n';
  }
}

void write_table_csv_file(const std::filesystem::path& path,
                          const Matrix& table) {
  auto out = open_output(path);
  write_table_csv(out, table);
}

Matrix read_table_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad JSON table: ") + e.what());
  }
  if (!doc.is_array()) throw ValidationError("JSON table must be an array");
  std::vector<std::vector<double>> rows;
  for (const auto& row : doc) {
    if (!row.is_array()) throw ValidationError("JSON table rows must be arrays");
    rows.emplace_back();
    for (const auto& cell : row) rows.back().push_back(cell.get<double>());
  }
  return rows_to_matrix(rows);
}

Matrix read_table_json_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_table_json(in);
}

void write_table_json(std::ostream& out, const Matrix& table) {
  json doc = json::array();
  for (Index r = 0; r < table.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < table.cols(); ++c) row.push_back(table(r, c));
    doc.push_back(std::move(row));
  }
  out << doc.dump(1) << '\n';
}

void write_table_json_file(const std::filesystem::path& path,
                           const Matrix& table) {
  auto out = open_output(path);
  write_table_json(out, table);
}

Matrix read_table_auto(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".json") return read_table_json_file(path);
  if (ext == ".csv") return read_table_csv_file(path);
  throw ValidationError("unknown table format: " + path.string());
}

void write_result_rows(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsSchema << '\n';
  out << "method,instance,alpha,eps,utility,normalized_utility,"
         "alpha_leakage,maxlift_leakage,support_size\n";
  for (const ResultRow& r : rows) {
    out << r.method << ',' << r.instance << ',' << r.alpha.str() << ','
        << format_double(r.eps) << ',' << format_double(r.utility) << ','
        << format_double(r.normalized_utility) << ','
        << format_double(r.alpha_leakage) << ','
        << format_double(r.maxlift_leakage) << ',' << r.support_size << '\n';
  }
}

void write_result_rows_file(const std::filesystem::path& path,
                            const std::vector<ResultRow>& rows) {
  auto out = open_output(path);
  write_result_rows(out, rows);
}

std::vector<ResultRow> read_result_rows(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatchError("empty results file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsSchema) {
    throw SchemaMismatchError("unexpected results header '" + line + "'");
  }
  std::vector<ResultRow> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv_line(line);
    if (first && !fields.empty() && fields[0] == "method") {
      first = false;
      continue;  // column header
    }
    first = false;
    if (fields.size() != 9) {
      throw SchemaMismatchError("expected 9 fields, got " +
                                std::to_string(fields.size()));
    }
    ResultRow r;
    r.method = fields[0];
    r.instance = static_cast<int>(parse_double(fields[1]));
    r.alpha = AlphaParam::parse(fields[2]);
    r.eps = parse_double(fields[3]);
    r.utility = parse_double(fields[4]);
    r.normalized_utility = parse_double(fields[5]);
    r.alpha_leakage = parse_double(fields[6]);
    r.maxlift_leakage = parse_double(fields[7]);
    r.support_size = static_cast<int>(parse_double(fields[8]));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_result_rows_file(
    const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_result_rows(in);
}

ResultRow to_result_row(const std::string& method, int instance,
                        const PutSolution& sol) {
  ResultRow r;
  r.method = method;
  r.instance = instance;
  r.alpha = sol.alpha;
  r.eps = sol.eps;
  r.utility = sol.utility;
  r.normalized_utility = sol.normalized_utility;
  r.alpha_leakage = sol.alpha_leakage;
  r.maxlift_leakage = sol.maxlift_leakage;
  r.support_size = static_cast<int>(sol.mechanism.output_card());
  return r;
}

void write_vertex_set_csv(std::ostream& out, const VertexSet& vs) {
  out << "# vertex set at eps " << format_double(vs.eps_level) << '\n';
  for (Index c = 0; c < vs.vertices.cols(); ++c) {
    for (Index r = 0; r < vs.vertices.rows(); ++r) {
      if (r) out << ',';
      out << format_double(vs.vertices(r, c));
    }
    out << '\n';
  }
}

namespace {

json mechanism_to_json(const Mechanism& m) {
  json backward = json::array();
  for (Index y = 0; y < m.output_card(); ++y) {
    json col = json::array();
    for (Index x = 0; x < m.backward().matrix().rows(); ++x) {
      col.push_back(m.backward().matrix()(x, y));
    }
    backward.push_back(std::move(col));
  }
  json p_y = json::array();
  for (Index y = 0; y < m.output_card(); ++y) {
    p_y.push_back(m.output_marginal()(y));
  }
  return json{{"backward_columns", std::move(backward)},
              {"output_marginal", std::move(p_y)}};
}

json put_solution_to_json(const PutSolution& sol) {
  json alpha;
  if (sol.alpha.is_infinite()) {
    alpha = "inf";
  } else {
    alpha = sol.alpha.value();
  }
  return json{{"eps", sol.eps},
              {"alpha", std::move(alpha)},
              {"utility", sol.utility},
              {"normalized_utility", sol.normalized_utility},
              {"alpha_leakage", sol.alpha_leakage},
              {"maxlift_leakage", sol.maxlift_leakage},
              {"mechanism", mechanism_to_json(sol.mechanism)}};
}

}  // namespace

std::string put_solution_json(const PutSolution& sol) {
  return put_solution_to_json(sol).dump(1);
}

std::string sweep_grid_json(const SweepGrid& grid) {
  json alphas = json::array();
  for (const AlphaParam& a : grid.alphas) {
    if (a.is_infinite()) {
      alphas.push_back("inf");
    } else {
      alphas.push_back(a.value());
    }
  }
  json cells = json::array();
  for (const auto& row : grid.cells) {
    json jrow = json::array();
    for (const PutSolution& sol : row) jrow.push_back(put_solution_to_json(sol));
    cells.push_back(std::move(jrow));
  }
  return json{{"alphas", std::move(alphas)},
              {"epsilons", grid.epsilons},
              {"cells", std::move(cells)},
              {"pool_sizes", grid.pool_sizes}}
      .dump(1);
}

void write_sweep_grid_json_file(const std::filesystem::path& path,
                                const SweepGrid& grid) {
  auto out = open_output(path);
  out << sweep_grid_json(grid) << '\n';
}

}  // namespace alift
