#include "prodrank/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "prodrank/errors.hpp"
#include "prodrank/format.hpp"
#include "prodrank/hash.hpp"

namespace prodrank {

namespace {

using nlohmann::ordered_json;

void check_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) {
    fail(ErrorKind::Params, where + " must be a JSON object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      fail(ErrorKind::Params, "unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_as(const ordered_json& obj, const char* key, const T& fallback,
         const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::Params,
         std::string("bad value for '") + key + "' in " + where);
  }
}

std::string require_string(const ordered_json& obj, const char* key,
                           const std::string& where) {
  if (!obj.contains(key)) {
    fail(ErrorKind::Params, std::string("missing '") + key + "' in " + where);
  }
  return get_as<std::string>(obj, key, "", where);
}

}  // namespace

RunConfig config_from_json(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Params, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, {"inputs", "scheme", "exclusions", "switches", "output"},
             "config");

  RunConfig cfg;
  if (!root.contains("inputs")) {
    fail(ErrorKind::Params, "config needs an 'inputs' section");
  }
  const auto& inputs = root.at("inputs");
  check_keys(inputs,
             {"staff", "publications", "byline", "taxonomy", "census_date"},
             "inputs");
  cfg.inputs.staff = require_string(inputs, "staff", "inputs");
  cfg.inputs.publications = require_string(inputs, "publications", "inputs");
  cfg.inputs.byline = require_string(inputs, "byline", "inputs");
  cfg.inputs.taxonomy = require_string(inputs, "taxonomy", "inputs");
  cfg.census_date = get_as<std::string>(inputs, "census_date", "", "inputs");

  if (root.contains("scheme")) {
    const auto& scheme = root.at("scheme");
    check_keys(scheme,
               {"intramural_end", "extramural_end", "extramural_adjacent",
                "uniform"},
               "scheme");
    cfg.scheme.intramural_end = get_as<double>(
        scheme, "intramural_end", cfg.scheme.intramural_end, "scheme");
    cfg.scheme.extramural_end = get_as<double>(
        scheme, "extramural_end", cfg.scheme.extramural_end, "scheme");
    cfg.scheme.extramural_adjacent =
        get_as<double>(scheme, "extramural_adjacent",
                       cfg.scheme.extramural_adjacent, "scheme");
    cfg.scheme.uniform =
        get_as<bool>(scheme, "uniform", cfg.scheme.uniform, "scheme");
  }
  cfg.scheme.validate();

  if (root.contains("exclusions")) {
    const auto& ex = root.at("exclusions");
    check_keys(ex, {"min_publishing_fraction", "min_universities", "apply"},
               "exclusions");
    cfg.exclusion_rules.min_publishing_fraction =
        get_as<double>(ex, "min_publishing_fraction",
                       cfg.exclusion_rules.min_publishing_fraction, "exclusions");
    cfg.exclusion_rules.min_universities = get_as<int>(
        ex, "min_universities", cfg.exclusion_rules.min_universities,
        "exclusions");
    cfg.apply_exclusions =
        get_as<bool>(ex, "apply", cfg.apply_exclusions, "exclusions");
  }

  if (root.contains("switches")) {
    const auto& sw = root.at("switches");
    check_keys(sw, {"rs_denominator", "full_counting", "average_subset"},
               "switches");
    const std::string rs =
        get_as<std::string>(sw, "rs_denominator", "full-roster", "switches");
    if (rs == "full-roster") {
      cfg.indicator_options.rs_denominator = RsDenominator::FullRoster;
    } else if (rs == "publishing-only") {
      cfg.indicator_options.rs_denominator = RsDenominator::PublishingOnly;
    } else {
      fail(ErrorKind::Params, "rs_denominator must be 'full-roster' or "
                              "'publishing-only', got '" + rs + "'");
    }
    const std::string fc =
        get_as<std::string>(sw, "full_counting", "per-institution", "switches");
    if (fc == "per-institution") {
      cfg.indicator_options.full_counting = FullCounting::PerInstitution;
    } else if (fc == "per-staff") {
      cfg.indicator_options.full_counting = FullCounting::PerStaff;
    } else {
      fail(ErrorKind::Params, "full_counting must be 'per-institution' or "
                              "'per-staff', got '" + fc + "'");
    }
    const std::string avg =
        get_as<std::string>(sw, "average_subset", "non-nil", "switches");
    if (avg == "non-nil") {
      cfg.average_subset = AverageSubset::NonNil;
    } else if (avg == "all-with-staff") {
      cfg.average_subset = AverageSubset::AllWithStaff;
    } else {
      fail(ErrorKind::Params, "average_subset must be 'non-nil' or "
                              "'all-with-staff', got '" + avg + "'");
    }
  }

  if (root.contains("output")) {
    const auto& out = root.at("output");
    check_keys(out, {"dir", "formats"}, "output");
    cfg.out_dir = get_as<std::string>(out, "dir", cfg.out_dir, "output");
    if (out.contains("formats")) {
      const auto formats = get_as<std::vector<std::string>>(
          out, "formats", {}, "output");
      cfg.write_csv = false;
      cfg.write_json = false;
      for (const auto& f : formats) {
        if (f == "csv") {
          cfg.write_csv = true;
        } else if (f == "json") {
          cfg.write_json = true;
        } else {
          fail(ErrorKind::Params, "unknown output format '" + f + "'");
        }
      }
      if (!cfg.write_csv && !cfg.write_json) {
        fail(ErrorKind::Params, "output.formats must not be empty");
      }
    }
  }
  return cfg;
}

RunConfig config_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

std::string config_hash(const RunConfig& config) {
  std::string blob;
  blob += "staff=" + config.inputs.staff + "\n";
  blob += "publications=" + config.inputs.publications + "\n";
  blob += "byline=" + config.inputs.byline + "\n";
  blob += "taxonomy=" + config.inputs.taxonomy + "\n";
  blob += "census=" + config.census_date + "\n";
  blob += "intramural_end=" + format_double(config.scheme.intramural_end) + "\n";
  blob += "extramural_end=" + format_double(config.scheme.extramural_end) + "\n";
  blob += "extramural_adjacent=" +
          format_double(config.scheme.extramural_adjacent) + "\n";
  blob += std::string("uniform=") + (config.scheme.uniform ? "1" : "0") + "\n";
  blob += std::string("apply_exclusions=") +
          (config.apply_exclusions ? "1" : "0") + "\n";
  blob += "min_publishing_fraction=" +
          format_double(config.exclusion_rules.min_publishing_fraction) + "\n";
  blob += "min_universities=" +
          std::to_string(config.exclusion_rules.min_universities) + "\n";
  blob += std::string("rs_denominator=") +
          rs_denominator_name(config.indicator_options.rs_denominator) + "\n";
  blob += std::string("full_counting=") +
          full_counting_name(config.indicator_options.full_counting) + "\n";
  blob += std::string("average_subset=") +
          average_subset_name(config.average_subset) + "\n";
  return fnv1a64_hex(blob);
}

const char* rs_denominator_name(RsDenominator value) {
  return value == RsDenominator::FullRoster ? "full-roster" : "publishing-only";
}

const char* full_counting_name(FullCounting value) {
  return value == FullCounting::PerInstitution ? "per-institution" : "per-staff";
}

const char* average_subset_name(AverageSubset value) {
  return value == AverageSubset::NonNil ? "non-nil" : "all-with-staff";
}

}  // namespace prodrank
