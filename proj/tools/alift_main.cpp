// Command-line experiment harness for alpha-lift privacy mechanism design.
//
// Subcommands:
//   gen       write random joint distributions as JSON
//   exact     exact max-lift optimum per budget
//   sweep     heuristic utility sweep over (alpha, eps) cells
//   baseline  merging-watchdog baseline over the same cells
//   report    aggregate per-instance CSVs into plot-ready series
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "alift/experiment.hpp"
#include "alift/io.hpp"
#include "alift/watchdog.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::uint64_t seed = 0;
  int instances = 1;
  int scard = 6;
  int xcard = 10;
  std::string alphas = "inf,100,10,3,1.5";
  std::string eps_start = "0.005";
  std::string eps_stop = "0.95";
  std::string eps_step = "0.005";
  double delta = 0.01;
  std::string eps_tail = "1";
  int interp = 3;
  double min_marginal = 1e-4;
  std::string out_dir = "out";
  int threads = 1;
  bool resume = false;
  bool emit_json = false;
  std::string joint_file;  // optional: run a single provided joint
};

alift::Rational rational_field(const json& j, const std::string& key,
                               const std::string& fallback) {
  if (!j.contains(key)) return alift::Rational::from_decimal(fallback);
  const auto& v = j.at(key);
  if (v.is_string()) return alift::Rational::from_decimal(v.get<std::string>());
  return alift::Rational::from_double(v.get<double>());
}

void load_config(const fs::path& path, Options& opt) {
  std::ifstream in(path);
  if (!in) throw alift::ValidationError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw alift::ValidationError(std::string("bad config JSON: ") + e.what());
  }
  auto get = [&](const char* key, auto& field) {
    if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("seed", opt.seed);
  get("instances", opt.instances);
  get("scard", opt.scard);
  get("xcard", opt.xcard);
  get("delta", opt.delta);
  get("interp", opt.interp);
  get("min_marginal", opt.min_marginal);
  get("out_dir", opt.out_dir);
  get("threads", opt.threads);
  get("resume", opt.resume);
  get("emit_json", opt.emit_json);
  if (doc.contains("alphas")) {
    if (doc["alphas"].is_array()) {
      std::string joined;
      for (const auto& a : doc["alphas"]) {
        if (!joined.empty()) joined += ',';
        joined += a.is_string() ? a.get<std::string>() : json(a).dump();
      }
      opt.alphas = joined;
    } else {
      opt.alphas = doc["alphas"].get<std::string>();
    }
  }
  // Budgets accept decimal strings (exact) or numbers.
  opt.eps_start = rational_field(doc, "eps_start", opt.eps_start).str();
  opt.eps_stop = rational_field(doc, "eps_stop", opt.eps_stop).str();
  opt.eps_step = rational_field(doc, "eps_step", opt.eps_step).str();
  opt.eps_tail = rational_field(doc, "eps_tail", opt.eps_tail).str();
}

alift::Rational parse_budget(const std::string& text) {
  // Accept "p/q" (from config round-trip) and plain decimals.
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return alift::Rational::from_decimal(text.substr(0, slash)) /
           alift::Rational::from_decimal(text.substr(slash + 1));
  }
  return alift::Rational::from_decimal(text);
}

std::vector<alift::AlphaParam> parse_alphas(const std::string& text) {
  std::vector<alift::AlphaParam> alphas;
  std::string cur;
  std::istringstream ss(text);
  while (std::getline(ss, cur, ',')) {
    if (!cur.empty()) alphas.push_back(alift::AlphaParam::parse(cur));
  }
  if (alphas.empty()) throw alift::ValidationError("no alphas given");
  return alphas;
}

alift::SweepConfig sweep_config(const Options& opt) {
  return alift::SweepConfig::uniform(
      parse_alphas(opt.alphas), parse_budget(opt.eps_start),
      parse_budget(opt.eps_step), parse_budget(opt.eps_stop), opt.interp,
      opt.delta, parse_budget(opt.eps_tail));
}

alift::ExperimentSpec experiment_spec(const Options& opt) {
  alift::ExperimentSpec spec;
  spec.n_instances = opt.instances;
  spec.s_card = opt.scard;
  spec.x_card = opt.xcard;
  spec.seed = opt.seed;
  spec.sweep = sweep_config(opt);
  spec.min_marginal = opt.min_marginal;
  spec.validate();
  return spec;
}

alift::RunOptions run_options(const Options& opt) {
  alift::RunOptions ro;
  ro.out_dir = opt.out_dir;
  ro.threads = opt.threads;
  ro.resume = opt.resume;
  ro.emit_grid_json = opt.emit_json;
  return ro;
}

int cmd_gen(const Options& opt) {
  fs::create_directories(opt.out_dir);
  for (int i = 0; i < opt.instances; ++i) {
    const auto joint = alift::gen_random_joint(
        opt.scard, opt.xcard, opt.seed, static_cast<std::uint64_t>(i),
        opt.min_marginal);
    char name[32];
    std::snprintf(name, sizeof(name), "instance_%04d.json", i);
    alift::write_table_json_file(fs::path(opt.out_dir) / name, joint.table());
  }
  std::cerr << "[gen] wrote " << opt.instances << " instances to "
            << opt.out_dir << '\n';
  return 0;
}

// Runs the selected methods; with --joint, runs that single table
// instead of the seeded stream.
int cmd_run(const Options& opt, const alift::RunSelection& sel) {
  if (!opt.joint_file.empty()) {
    const auto table = alift::read_table_auto(opt.joint_file);
    const auto joint = alift::validate_joint(table);
    const auto cfg = sweep_config(opt);
    fs::create_directories(opt.out_dir);
    std::vector<alift::ResultRow> rows;
    if (sel.sweep) {
      const auto grid = alift::run_sweep(joint, cfg);
      for (size_t i = 0; i < grid.alphas.size(); ++i) {
        for (size_t j = 0; j < grid.epsilons.size(); ++j) {
          rows.push_back(alift::to_result_row("sweep", 0, grid.at(i, j)));
        }
      }
      if (opt.emit_json) {
        alift::write_sweep_grid_json_file(
            fs::path(opt.out_dir) / "sweep_0000.json", grid);
      }
      alift::write_result_rows_file(
          fs::path(opt.out_dir) / "results_sweep_0000.csv", rows);
    }
    if (sel.exact) {
      std::vector<alift::ResultRow> er;
      for (const auto& eps : cfg.epsilons) {
        er.push_back(alift::to_result_row(
            "exact", 0, alift::solve_maxlift_put(joint, eps.to_double())));
      }
      alift::write_result_rows_file(
          fs::path(opt.out_dir) / "results_exact_0000.csv", er);
    }
    if (sel.baseline) {
      std::vector<alift::ResultRow> br;
      for (const auto& a : cfg.alphas) {
        for (const auto& eps : cfg.epsilons) {
          br.push_back(alift::to_result_row(
              "watchdog", 0,
              alift::watchdog_merge(joint, eps.to_double(), a)));
        }
      }
      alift::write_result_rows_file(
          fs::path(opt.out_dir) / "results_watchdog_0000.csv", br);
    }
    return 0;
  }
  alift::run_experiment(experiment_spec(opt), run_options(opt), sel);
  return 0;
}

int cmd_report(const Options& opt, std::vector<std::string> inputs) {
  std::vector<fs::path> files;
  if (inputs.empty()) {
    files = alift::find_result_files(opt.out_dir);
    if (files.empty()) {
      throw alift::ValidationError("no result CSVs under " + opt.out_dir);
    }
  } else {
    files.assign(inputs.begin(), inputs.end());
  }
  const auto report = alift::build_report(files, opt.out_dir);
  std::cout << "method      alpha      eps        mean_nu      mean_leakage\n";
  for (const auto& [key, cell] : report.cells) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s  %-8s  %-9.4g  %-11.6g  %-11.6g",
                  key.method.c_str(), key.alpha.str().c_str(), key.eps,
                  cell.mean_normalized_utility, cell.mean_alpha_leakage);
    std::cout << line << '\n';
  }
  for (const auto& [alpha, value] : report.mean_eps_max) {
    std::cout << "eps_max[alpha=" << alpha.str() << "] mean = " << value
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  std::string config_file;

  // Pass 1: pick up --config so file values load before flag overrides.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") config_file = argv[i + 1];
  }
  try {
    if (!config_file.empty()) load_config(config_file, opt);

    CLI::App app{"alpha-lift privacy-utility tradeoff toolkit"};
    app.require_subcommand(1);
    std::string ignored;
    app.add_option("--config", ignored, "JSON config mirroring all flags");

    auto add_common = [&](CLI::App* sub) {
      sub->add_option("--seed", opt.seed, "random stream seed");
      sub->add_option("--instances", opt.instances, "number of instances");
      sub->add_option("--scard", opt.scard, "|S|");
      sub->add_option("--xcard", opt.xcard, "|X|");
      sub->add_option("--min-marginal", opt.min_marginal,
                      "marginal rejection threshold");
      sub->add_option("--out-dir", opt.out_dir, "output directory");
      sub->add_option("--config", ignored, "JSON config mirroring all flags");
    };
    auto add_sweepish = [&](CLI::App* sub) {
      add_common(sub);
      sub->add_option("--alphas", opt.alphas, "comma list, e.g. inf,100,10");
      sub->add_option("--eps-start", opt.eps_start, "first budget (decimal)");
      sub->add_option("--eps-stop", opt.eps_stop, "last budget (decimal)");
      sub->add_option("--eps-step", opt.eps_step, "budget step (decimal)");
      sub->add_option("--delta", opt.delta, "band width");
      sub->add_option("--eps-tail", opt.eps_tail, "budget past the grid");
      sub->add_option("--interp", opt.interp, "levels per budget step");
      sub->add_option("--threads", opt.threads, "instance-level workers");
      sub->add_flag("--resume", opt.resume, "skip finished instances");
      sub->add_flag("--json", opt.emit_json, "also emit full sweep JSON");
      sub->add_option("--joint", opt.joint_file,
                      "run one provided joint (.csv/.json) instead");
    };

    CLI::App* gen = app.add_subcommand("gen", "write random joints");
    add_common(gen);
    CLI::App* exact = app.add_subcommand("exact", "exact max-lift optimum");
    add_sweepish(exact);
    CLI::App* sweep = app.add_subcommand("sweep", "heuristic (alpha,eps) sweep");
    add_sweepish(sweep);
    CLI::App* baseline = app.add_subcommand("baseline", "watchdog baseline");
    add_sweepish(baseline);
    CLI::App* report = app.add_subcommand("report", "aggregate result CSVs");
    std::vector<std::string> report_inputs;
    add_common(report);
    report->add_option("inputs", report_inputs, "result CSV files");

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }

    if (gen->parsed()) return cmd_gen(opt);
    if (exact->parsed()) {
      return cmd_run(opt, alift::RunSelection{true, false, false});
    }
    if (sweep->parsed()) {
      return cmd_run(opt, alift::RunSelection{false, true, false});
    }
    if (baseline->parsed()) {
      return cmd_run(opt, alift::RunSelection{false, false, true});
    }
    if (report->parsed()) return cmd_report(opt, report_inputs);
    return 2;
  } catch (const alift::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
