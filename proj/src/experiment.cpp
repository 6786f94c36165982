#include "alift/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "alift/watchdog.hpp"

namespace alift {

namespace {

constexpr const char* kEpsMaxSchema = "# alift-epsmax v1";

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in [0, 1) from the engine's full 64-bit output; the engine is
// specified by the standard, so draws are identical across platforms.
double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::string instance_tag(std::uint64_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04llu",
                static_cast<unsigned long long>(index));
  return buf;
}

struct EpsMaxRow {
  int instance = 0;
  AlphaParam alpha = AlphaParam::infinity();
  double value = 0.0;
};

void write_eps_max_rows(const std::filesystem::path& path,
                        const std::vector<EpsMaxRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string());
  out << kEpsMaxSchema << '\n' << "instance,alpha,eps_max\n";
  for (const EpsMaxRow& r : rows) {
    out << r.instance << ',' << r.alpha.str() << ',' << format_double(r.value)
        << '\n';
  }
}

std::vector<EpsMaxRow> read_eps_max_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatchError("empty eps-max file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kEpsMaxSchema) {
    throw SchemaMismatchError("unexpected eps-max header '" + line + "'");
  }
  std::vector<EpsMaxRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string inst, alpha, value;
    if (!std::getline(ss, inst, ',') || !std::getline(ss, alpha, ',') ||
        !std::getline(ss, value)) {
      throw SchemaMismatchError("bad eps-max row '" + line + "'");
    }
    if (inst == "instance") continue;
    rows.push_back(EpsMaxRow{std::stoi(inst), AlphaParam::parse(alpha),
                             std::stod(value)});
  }
  return rows;
}

std::string peek_header(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void atomic_write(const std::filesystem::path& path,
                  const std::function<void(const std::filesystem::path&)>& fn) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  fn(tmp);
  std::filesystem::rename(tmp, path);
}

struct Welford {
  int n = 0;
  double mean = 0.0, m2 = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
    min = std::min(min, v);
    max = std::max(max, v);
  }
  double stderr_mean() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / (n - 1) / n);
  }
};

}  // namespace

void ExperimentSpec::validate() const {
  if (n_instances < 1) throw ValidationError("need at least one instance");
  if (s_card < 2 || x_card < 2) throw ValidationError("alphabets need >= 2 symbols");
  const double cap = 1.0 / std::max(s_card, x_card);
  if (!(min_marginal > 0.0 && min_marginal < cap)) {
    throw ValidationError("min_marginal must lie in (0, 1/max(|S|,|X|))");
  }
  sweep.validate();
}

JointDistribution gen_random_joint(int s_card, int x_card, std::uint64_t seed,
                                   std::uint64_t instance_index,
                                   double min_marginal) {
  if (s_card < 1 || x_card < 1) throw ValidationError("bad alphabet sizes");
  std::uint64_t state = seed;
  splitmix64(state);
  state ^= 0x7f4a7c15ULL + instance_index * 0x9e3779b97f4a7c15ULL;
  std::mt19937_64 eng(splitmix64(state));

  Matrix table(s_card, x_card);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (Index s = 0; s < s_card; ++s) {
      for (Index x = 0; x < x_card; ++x) {
        table(s, x) = -std::log1p(-uniform01(eng));  // Exp(1)
      }
    }
    table /= table.sum();
    if (table.rowwise().sum().minCoeff() >= min_marginal &&
        table.colwise().sum().minCoeff() >= min_marginal) {
      return validate_joint(table);
    }
  }
  throw ResampleLimitError("marginal threshold rejected 1000 draws");
}

AggregateReport aggregate_rows(const std::vector<ResultRow>& rows,
                               const std::vector<ResultRow>& eps_max_rows) {
  struct CellAcc {
    Welford nu, aleak, mleak;
  };
  std::map<AggregateKey, CellAcc> acc;
  for (const ResultRow& r : rows) {
    CellAcc& cell = acc[AggregateKey{r.method, r.alpha, r.eps}];
    cell.nu.add(r.normalized_utility);
    cell.aleak.add(r.alpha_leakage);
    cell.mleak.add(r.maxlift_leakage);
  }
  AggregateReport report;
  for (const auto& [key, cell] : acc) {
    AggregateCell out;
    out.n = cell.nu.n;
    out.mean_normalized_utility = cell.nu.mean;
    out.stderr_normalized_utility = cell.nu.stderr_mean();
    out.mean_alpha_leakage = cell.aleak.mean;
    out.stderr_alpha_leakage = cell.aleak.stderr_mean();
    out.mean_maxlift_leakage = cell.mleak.mean;
    out.stderr_maxlift_leakage = cell.mleak.stderr_mean();
    out.min_normalized_utility = cell.nu.min;
    out.max_normalized_utility = cell.nu.max;
    report.cells.emplace(key, out);
  }
  std::map<AlphaParam, Welford, std::greater<AlphaParam>> em;
  for (const ResultRow& r : eps_max_rows) em[r.alpha].add(r.eps);
  for (const auto& [alpha, w] : em) report.mean_eps_max[alpha] = w.mean;
  return report;
}

AggregateReport run_experiment(const ExperimentSpec& spec,
                               const RunOptions& opts,
                               const RunSelection& sel) {
  spec.validate();
  std::filesystem::create_directories(opts.out_dir);

  std::mutex progress_mutex;
  auto progress = [&](const std::string& line) {
    std::lock_guard<std::mutex> lock(progress_mutex);
    if (opts.progress) {
      opts.progress(line);
    } else {
      std::cerr << line << '\n';
    }
  };

  const auto path_for = [&](const char* kind, std::uint64_t i) {
    return opts.out_dir / (std::string(kind) + "_" + instance_tag(i) + ".csv");
  };

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (!failed.load()) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= static_cast<std::uint64_t>(spec.n_instances)) break;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<std::filesystem::path> expected;
        if (sel.sweep) expected.push_back(path_for("results_sweep", i));
        if (sel.exact) expected.push_back(path_for("results_exact", i));
        if (sel.baseline) expected.push_back(path_for("results_watchdog", i));
        expected.push_back(path_for("epsmax", i));
        if (opts.resume &&
            std::all_of(expected.begin(), expected.end(), [](const auto& p) {
              return std::filesystem::exists(p);
            })) {
          progress("[skip] instance " + instance_tag(i) + " (resume)");
          continue;
        }

        const JointDistribution joint = gen_random_joint(
            spec.s_card, spec.x_card, spec.seed, i, spec.min_marginal);
        const int inst = static_cast<int>(i);

        std::vector<EpsMaxRow> em_rows;
        for (const AlphaParam& a : spec.sweep.alphas) {
          em_rows.push_back(EpsMaxRow{inst, a, eps_max(joint, a)});
        }
        atomic_write(path_for("epsmax", i), [&](const auto& p) {
          write_eps_max_rows(p, em_rows);
        });

        if (sel.sweep) {
          const SweepGrid grid = run_sweep(joint, spec.sweep);
          std::vector<ResultRow> rows;
          for (size_t ai = 0; ai < grid.alphas.size(); ++ai) {
            for (size_t ej = 0; ej < grid.epsilons.size(); ++ej) {
              rows.push_back(to_result_row("sweep", inst, grid.at(ai, ej)));
            }
          }
          atomic_write(path_for("results_sweep", i), [&](const auto& p) {
            write_result_rows_file(p, rows);
          });
          if (opts.emit_grid_json) {
            atomic_write(opts.out_dir / ("sweep_" + instance_tag(i) + ".json"),
                         [&](const auto& p) {
                           write_sweep_grid_json_file(p, grid);
                         });
          }
        }
        if (sel.exact) {
          std::vector<ResultRow> rows;
          for (const Rational& eps : spec.sweep.epsilons) {
            rows.push_back(to_result_row(
                "exact", inst, solve_maxlift_put(joint, eps.to_double())));
          }
          atomic_write(path_for("results_exact", i), [&](const auto& p) {
            write_result_rows_file(p, rows);
          });
        }
        if (sel.baseline) {
          std::vector<ResultRow> rows;
          for (const AlphaParam& a : spec.sweep.alphas) {
            for (const Rational& eps : spec.sweep.epsilons) {
              rows.push_back(to_result_row(
                  "watchdog", inst, watchdog_merge(joint, eps.to_double(), a)));
            }
          }
          atomic_write(path_for("results_watchdog", i), [&](const auto& p) {
            write_result_rows_file(p, rows);
          });
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        progress("[done] instance " + instance_tag(i) + "/" +
                 std::to_string(spec.n_instances) + " (" +
                 std::to_string(ms) + " ms)");
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };

  const int n_threads = std::max(1, std::min(opts.threads, spec.n_instances));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  return build_report(find_result_files(opts.out_dir), opts.out_dir);
}

std::vector<std::filesystem::path> find_result_files(
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::exists(dir)) return files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.ends_with(".csv") &&
        (name.starts_with("results_") || name.starts_with("epsmax_"))) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

AggregateReport build_report(const std::vector<std::filesystem::path>& inputs,
                             const std::filesystem::path& out_dir) {
  std::vector<ResultRow> rows;
  std::vector<ResultRow> em_rows;
  for (const auto& path : inputs) {
    const std::string header = peek_header(path);
    if (header == kEpsMaxSchema) {
      for (const EpsMaxRow& r : read_eps_max_rows(path)) {
        ResultRow rr;
        rr.instance = r.instance;
        rr.alpha = r.alpha;
        rr.eps = r.value;
        em_rows.push_back(std::move(rr));
      }
    } else if (header == kResultsSchema) {
      auto batch = read_result_rows_file(path);
      rows.insert(rows.end(), batch.begin(), batch.end());
    } else {
      throw SchemaMismatchError("unrecognized input " + path.string());
    }
  }
  const AggregateReport report = aggregate_rows(rows, em_rows);

  std::filesystem::create_directories(out_dir);
  const auto write_series = [&](const std::filesystem::path& path,
                                const char* tag, auto mean_of, auto err_of) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path.string());
    out << "# alift-report-" << tag << " v1\n";
    out << "method,alpha,eps,mean,stderr,n\n";
    for (const auto& [key, cell] : report.cells) {
      out << key.method << ',' << key.alpha.str() << ','
          << format_double(key.eps) << ',' << format_double(mean_of(cell))
          << ',' << format_double(err_of(cell)) << ',' << cell.n << '\n';
    }
  };
  write_series(out_dir / "report_utility.csv", "utility",
               [](const AggregateCell& c) { return c.mean_normalized_utility; },
               [](const AggregateCell& c) { return c.stderr_normalized_utility; });
  write_series(out_dir / "report_alpha_leakage.csv", "alpha-leakage",
               [](const AggregateCell& c) { return c.mean_alpha_leakage; },
               [](const AggregateCell& c) { return c.stderr_alpha_leakage; });
  write_series(out_dir / "report_maxlift_leakage.csv", "maxlift-leakage",
               [](const AggregateCell& c) { return c.mean_maxlift_leakage; },
               [](const AggregateCell& c) { return c.stderr_maxlift_leakage; });

  {
    std::ofstream out(out_dir / "report_baseline.csv", std::ios::binary);
    out << "# alift-report-baseline v1\n";
    out << "alpha,eps,mean_nu_sweep,mean_nu_watchdog,n\n";
    for (const auto& [key, cell] : report.cells) {
      if (key.method != "sweep") continue;
      const auto wd = report.cells.find(
          AggregateKey{"watchdog", key.alpha, key.eps});
      if (wd == report.cells.end()) continue;
      out << key.alpha.str() << ',' << format_double(key.eps) << ','
          << format_double(cell.mean_normalized_utility) << ','
          << format_double(wd->second.mean_normalized_utility) << ','
          << std::min(cell.n, wd->second.n) << '\n';
    }
  }
  {
    std::ofstream out(out_dir / "report_eps_max.csv", std::ios::binary);
    out << "# alift-report-epsmax v1\n";
    out << "alpha,mean_eps_max\n";
    for (const auto& [alpha, value] : report.mean_eps_max) {
      out << alpha.str() << ',' << format_double(value) << '\n';
    }
  }
  return report;
}

}  // namespace alift
