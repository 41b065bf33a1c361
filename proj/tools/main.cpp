#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prodrank/config.hpp"
#include "prodrank/corpus.hpp"
#include "prodrank/csv.hpp"
#include "prodrank/errors.hpp"
#include "prodrank/pipeline.hpp"
#include "prodrank/report.hpp"
#include "prodrank/synth.hpp"

namespace {

using namespace prodrank;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Integrity:
    case ErrorKind::Baseline:
      return 2;
    case ErrorKind::Io:
      return 3;
    case ErrorKind::EmptyAnalysis:
      return 4;
    case ErrorKind::Lookup:
    case ErrorKind::Domain:
    case ErrorKind::Aggregation:
    case ErrorKind::Comparison:
    case ErrorKind::Params:
      return 5;
  }
  return 1;
}

struct CommonOpts {
  std::string config_path;
  std::string out_override;
  std::string format_override;
  std::string level;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_level) {
  cmd->add_option("--config", opts.config_path, "Run configuration JSON")
      ->required();
  cmd->add_option("--out", opts.out_override,
                  "Output directory (overrides the config)");
  cmd->add_option("--format", opts.format_override,
                  "Comma list of output formats: csv,json");
  if (with_level) {
    cmd->add_option("--level", opts.level, "Aggregation level: sds or uda")
        ->check(CLI::IsMember({"sds", "uda"}));
  }
}

RunConfig load_config(const CommonOpts& opts) {
  RunConfig cfg = config_from_file(opts.config_path);
  if (!opts.out_override.empty()) cfg.out_dir = opts.out_override;
  if (!opts.format_override.empty()) {
    cfg.write_csv = false;
    cfg.write_json = false;
    for (const auto& f : csv::split(opts.format_override, ',')) {
      if (f == "csv") {
        cfg.write_csv = true;
      } else if (f == "json") {
        cfg.write_json = true;
      } else {
        fail(ErrorKind::Params, "unknown output format '" + f + "'");
      }
    }
  }
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

int run_validate(const CommonOpts& opts) {
  const RunConfig cfg = load_config(opts);
  const LoadResult result = load_corpus_checked(cfg.inputs, cfg.census_date);
  write_text_file(out_path(cfg, "validation_report.json"),
                  render_validation_json(result.violations));
  if (result.violations.empty()) {
    std::cout << "corpus is valid\n";
    return 0;
  }
  std::cout << result.violations.size() << " violation(s)\n";
  for (const auto& v : result.violations) {
    std::cout << "  [" << v.code << "] " << v.message << "\n";
  }
  return 2;
}

AnalysisRun analyse(const RunConfig& cfg) {
  const Corpus corpus = load_corpus(cfg.inputs, cfg.census_date);
  return run_analysis(corpus, cfg);
}

int run_compute(const CommonOpts& opts) {
  const RunConfig cfg = load_config(opts);
  const AnalysisRun run = analyse(cfg);
  const ReportMeta meta = report_meta(run);

  std::cout << render_exclusions_text(run.exclusions);
  for (const auto& w : run.averages.warnings) {
    std::cerr << "warning: " << w << "\n";
  }

  const bool want_sds = opts.level.empty() || opts.level == "sds";
  const bool want_uda = opts.level.empty() || opts.level == "uda";
  if (want_sds) {
    if (cfg.write_csv) {
      write_text_file(out_path(cfg, "indicators_sds.csv"),
                      render_sds_indicators_csv(run.ranked_sds, meta));
    }
    if (cfg.write_json) {
      write_text_file(out_path(cfg, "indicators_sds.json"),
                      render_sds_indicators_json(run.ranked_sds, meta));
    }
    std::cout << "wrote " << run.ranked_sds.size() << " sds row(s)\n";
  }
  if (want_uda) {
    if (cfg.write_csv) {
      write_text_file(out_path(cfg, "indicators_uda.csv"),
                      render_uda_indicators_csv(run.ranked_uda, meta));
    }
    if (cfg.write_json) {
      write_text_file(out_path(cfg, "indicators_uda.json"),
                      render_uda_indicators_json(run.ranked_uda, meta));
    }
    std::cout << "wrote " << run.ranked_uda.size() << " uda row(s)\n";
  }
  return 0;
}

int run_compare(const CommonOpts& opts, const std::string& pairs_text) {
  const RunConfig cfg = load_config(opts);
  const std::vector<PairSpec> pairs =
      parse_pairs(pairs_text.empty() ? kDefaultPairs : pairs_text);
  const Level level = opts.level == "uda" ? Level::Uda : Level::Sds;

  const AnalysisRun run = analyse(cfg);
  const ReportMeta meta = report_meta(run);
  const ComparisonBattery battery = run_comparisons(run, level, pairs);

  for (const auto& comparison : battery.pairs) {
    const std::string stem = std::string("compare_") +
                             indicator_name(comparison.spec.first) + "_" +
                             indicator_name(comparison.spec.second) + "_" +
                             level_name(level);
    if (cfg.write_csv) {
      write_text_file(out_path(cfg, stem + ".csv"),
                      render_compare_csv(comparison, meta));
    }
    if (cfg.write_json) {
      write_text_file(out_path(cfg, stem + ".json"),
                      render_compare_json(comparison, meta));
    }
    std::cout << indicator_name(comparison.spec.first) << ":"
              << indicator_name(comparison.spec.second) << " compared "
              << comparison.summary.scopes.size() << " scope(s), skipped "
              << comparison.summary.skipped.size() << "\n";
  }
  write_text_file(out_path(cfg, "summary.json"),
                  render_summary_json(battery, meta));
  return 0;
}

int run_synth(const std::string& params_path, std::uint64_t seed,
              bool seed_given, const std::string& out_dir) {
  SynthParams params;
  if (params_path.empty()) {
    params = default_params();
  } else {
    std::ifstream in(params_path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + params_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    params = params_from_json(buffer.str());
  }
  if (seed_given) params.seed = seed;

  const Corpus corpus = generate_corpus(params);
  write_corpus(corpus, out_dir);
  write_text_file((std::filesystem::path(out_dir) / "params.json").string(),
                  params_to_json(params));
  std::cout << "wrote " << corpus.roster.size() << " researcher(s), "
            << corpus.publications.size() << " publication(s) to " << out_dir
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staff-normalized research productivity indicators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  CommonOpts validate_opts;
  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "Check a corpus and write a validation report");
  add_common(validate_cmd, validate_opts, false);

  CommonOpts compute_opts;
  CLI::App* compute_cmd = app.add_subcommand(
      "compute", "Compute indicator tables with percentile ranks");
  add_common(compute_cmd, compute_opts, true);

  CommonOpts compare_opts;
  std::string pairs_text;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "Compare indicator rankings pair by pair");
  add_common(compare_cmd, compare_opts, true);
  compare_cmd->add_option(
      "--pairs", pairs_text,
      std::string("Comma list of indicator pairs (default: ") + kDefaultPairs +
          ")");

  std::string synth_params_path;
  std::uint64_t synth_seed = 0;
  std::string synth_out = "synth_out";
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Generate a deterministic synthetic corpus");
  synth_cmd->add_option("--params", synth_params_path,
                        "Generator parameters JSON (defaults when omitted)");
  CLI::Option* seed_opt =
      synth_cmd->add_option("--seed", synth_seed, "Override the seed");
  synth_cmd->add_option("--out", synth_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 5;
  }

  try {
    if (validate_cmd->parsed()) return run_validate(validate_opts);
    if (compute_cmd->parsed()) return run_compute(compute_opts);
    if (compare_cmd->parsed()) return run_compare(compare_opts, pairs_text);
    if (synth_cmd->parsed()) {
      return run_synth(synth_params_path, synth_seed, seed_opt->count() > 0,
                       synth_out);
    }
  } catch (const prodrank::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
