#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "json.hpp"
#include "prodrank/compare.hpp"
#include "prodrank/config.hpp"
#include "prodrank/corpus.hpp"
#include "prodrank/credit.hpp"
#include "prodrank/errors.hpp"
#include "prodrank/indicators.hpp"
#include "prodrank/pipeline.hpp"
#include "prodrank/report.hpp"
#include "prodrank/synth.hpp"

namespace py = pybind11;

namespace {

using namespace prodrank;

py::object loads(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

CollaborationClass collaboration_from(const std::string& name) {
  if (name == "intramural") return CollaborationClass::Intramural;
  if (name == "extramural") return CollaborationClass::Extramural;
  fail(ErrorKind::Params,
       "collaboration must be 'intramural' or 'extramural', got '" + name + "'");
}

AnalysisRun analyse_config(const RunConfig& cfg) {
  const Corpus corpus = load_corpus(cfg.inputs, cfg.census_date);
  return run_analysis(corpus, cfg);
}

nlohmann::ordered_json exclusions_json(const ExclusionReport& report) {
  nlohmann::ordered_json out;
  nlohmann::ordered_json excluded = nlohmann::ordered_json::array();
  for (const auto& e : report.excluded) {
    excluded.push_back({{"sds_code", e.sds_code},
                        {"rules", e.rules},
                        {"publishing_fraction", e.publishing_fraction},
                        {"university_span", e.university_span}});
  }
  out["excluded"] = std::move(excluded);
  out["retained"] = report.retained;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Staff-normalized research productivity indicators";

  py::register_exception<Error>(m, "AnalysisError");

  m.def(
      "position_weights",
      [](std::size_t n, const std::string& collaboration, double intramural_end,
         double extramural_end, double extramural_adjacent, bool uniform) {
        CreditScheme scheme;
        scheme.intramural_end = intramural_end;
        scheme.extramural_end = extramural_end;
        scheme.extramural_adjacent = extramural_adjacent;
        scheme.uniform = uniform;
        return position_weights(n, collaboration_from(collaboration), scheme);
      },
      py::arg("n"), py::arg("collaboration") = "intramural",
      py::arg("intramural_end") = 0.40, py::arg("extramural_end") = 0.30,
      py::arg("extramural_adjacent") = 0.15, py::arg("uniform") = false,
      "Byline position weights for a byline of length n; sums to 1.");

  m.def("percentile_scale", &percentile_scale, py::arg("values"),
        "Percentile ranks on 0..100, best value first, ties averaged.");

  m.def("spearman_rho", &spearman_rho, py::arg("x"), py::arg("y"),
        "Rank correlation over tie-averaged ranks.");

  m.def("average_ranks", &average_ranks, py::arg("values"),
        "Tie-averaged ranks, rank 1 for the largest value.");

  m.def("quartile_of", &quartile_of, py::arg("rank"), py::arg("n"),
        "Quartile of a 1-based rank among n ranked items.");

  m.def(
      "default_params_json", []() { return params_to_json(default_params()); },
      "Default corpus generator parameters as a JSON string.");

  m.def(
      "generate_corpus_files",
      [](const std::string& params_json, const std::string& out_dir) {
        const SynthParams params = params_from_json(params_json);
        const Corpus corpus = generate_corpus(params);
        write_corpus(corpus, out_dir);
        py::dict out;
        out["researchers"] = corpus.roster.size();
        out["publications"] = corpus.publications.size();
        out["digest"] = corpus_digest(corpus);
        return out;
      },
      py::arg("params_json"), py::arg("out_dir"),
      "Generate a deterministic synthetic corpus into out_dir.");

  m.def(
      "validate_corpus",
      [](const std::string& staff, const std::string& publications,
         const std::string& byline, const std::string& taxonomy) {
        const LoadResult result =
            load_corpus_checked({staff, publications, byline, taxonomy});
        py::list out;
        for (const auto& v : result.violations) {
          py::dict d;
          d["code"] = v.code;
          d["message"] = v.message;
          out.append(d);
        }
        return out;
      },
      py::arg("staff"), py::arg("publications"), py::arg("byline"),
      py::arg("taxonomy"),
      "Validate the four corpus files; returns the violations, empty when "
      "the corpus is sound.");

  m.def(
      "analyze",
      [](const std::string& config_json) {
        const RunConfig cfg = config_from_json(config_json);
        const AnalysisRun run = analyse_config(cfg);
        const ReportMeta meta = report_meta(run);
        py::dict out;
        out["meta"] = loads(nlohmann::ordered_json({{"config", meta.config_stamp},
                                                    {"corpus", meta.corpus_digest},
                                                    {"census", meta.census_date}})
                                .dump());
        out["sds"] =
            loads(render_sds_indicators_json(run.ranked_sds, meta))["rows"];
        out["uda"] =
            loads(render_uda_indicators_json(run.ranked_uda, meta))["rows"];
        out["exclusions"] = loads(exclusions_json(run.exclusions).dump());
        out["warnings"] = run.averages.warnings;
        return out;
      },
      py::arg("config_json"),
      "Run the full analysis described by a config JSON string; returns the "
      "ranked indicator rows per level.");

  m.def(
      "compare",
      [](const std::string& config_json, const std::string& pairs,
         const std::string& level) {
        const RunConfig cfg = config_from_json(config_json);
        const AnalysisRun run = analyse_config(cfg);
        const ReportMeta meta = report_meta(run);
        Level lvl;
        if (level == "sds") {
          lvl = Level::Sds;
        } else if (level == "uda") {
          lvl = Level::Uda;
        } else {
          fail(ErrorKind::Params,
               "level must be 'sds' or 'uda', got '" + level + "'");
        }
        const ComparisonBattery battery =
            run_comparisons(run, lvl, parse_pairs(pairs));
        py::dict out;
        out["summary"] = loads(render_summary_json(battery, meta));
        py::dict tables;
        for (const auto& comparison : battery.pairs) {
          const std::string key =
              std::string(indicator_name(comparison.spec.first)) + ":" +
              indicator_name(comparison.spec.second);
          tables[py::str(key)] =
              loads(render_compare_json(comparison, meta))["rows"];
        }
        out["tables"] = tables;
        return out;
      },
      py::arg("config_json"), py::arg("pairs"), py::arg("level") = "sds",
      "Rank-comparison battery over indicator pairs like 'wfo:fo,wfi:i'.");

  m.def(
      "summarize_corpus",
      [](const std::string& staff, const std::string& publications,
         const std::string& byline, const std::string& taxonomy) {
        const Corpus corpus =
            load_corpus({staff, publications, byline, taxonomy});
        const CorpusSummary summary = summarize(corpus);
        auto row_json = [](const UdaSummary& row) {
          return nlohmann::ordered_json(
              {{"uda_code", row.uda_code},
               {"n_sds", row.n_sds},
               {"staff_total", row.staff_total},
               {"staff_publishing", row.staff_publishing},
               {"publications", row.publications},
               {"citations", row.citations},
               {"universities_output", row.universities_output},
               {"universities_impact", row.universities_impact}});
        };
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : summary.per_uda) rows.push_back(row_json(row));
        rows.push_back(row_json(summary.total));
        return loads(rows.dump());
      },
      py::arg("staff"), py::arg("publications"), py::arg("byline"),
      py::arg("taxonomy"),
      "Per-discipline corpus counts with a deduplicated total row.");
}
