#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "alift/polytope.hpp"
#include "alift/prob.hpp"
#include "alift/put.hpp"
#include "alift/sweep.hpp"

namespace alift {

/// Shortest representation that parses back to the same double
/// (17 significant digits).
std::string format_double(double v);

/// Joint tables as CSV: one row per sensitive symbol s, one column per
/// useful symbol x.
Matrix read_table_csv(std::istream& in);
Matrix read_table_csv_file(const std::filesystem::path& path);
void write_table_csv(std::ostream& out, const Matrix& table);
void write_table_csv_file(const std::filesystem::path& path,
                          const Matrix& table);

/// Joint tables as JSON: nested arrays, rows outermost.
Matrix read_table_json(std::istream& in);
Matrix read_table_json_file(const std::filesystem::path& path);
void write_table_json(std::ostream& out, const Matrix& table);
void write_table_json_file(const std::filesystem::path& path,
                           const Matrix& table);

/// Reads a joint from .json or .csv based on the file extension.
Matrix read_table_auto(const std::filesystem::path& path);

/// One result record of a sweep/exact/baseline run.
struct ResultRow {
  std::string method;  // "sweep" | "exact" | "watchdog"
  int instance = 0;
  AlphaParam alpha = AlphaParam::infinity();
  double eps = 0.0;
  double utility = 0.0;
  double normalized_utility = 0.0;
  double alpha_leakage = 0.0;
  double maxlift_leakage = 0.0;
  int support_size = 0;
};

inline constexpr const char* kResultsSchema = "# alift-results v1";

void write_result_rows(std::ostream& out, const std::vector<ResultRow>& rows);
void write_result_rows_file(const std::filesystem::path& path,
                            const std::vector<ResultRow>& rows);
/// Throws SchemaMismatchError unless the header matches kResultsSchema.
std::vector<ResultRow> read_result_rows(std::istream& in);
std::vector<ResultRow> read_result_rows_file(const std::filesystem::path& path);

ResultRow to_result_row(const std::string& method, int instance,
                        const PutSolution& sol);

/// Debug dump: one vertex per row, 17 significant digits.
void write_vertex_set_csv(std::ostream& out, const VertexSet& vs);

/// Full-fidelity JSON for solved mechanisms and sweep grids.
std::string put_solution_json(const PutSolution& sol);
std::string sweep_grid_json(const SweepGrid& grid);
void write_sweep_grid_json_file(const std::filesystem::path& path,
                                const SweepGrid& grid);

}  // namespace alift
