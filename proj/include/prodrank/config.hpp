#pragma once

#include <string>

#include "prodrank/aggregate.hpp"
#include "prodrank/corpus.hpp"
#include "prodrank/credit.hpp"
#include "prodrank/indicators.hpp"

namespace prodrank {

// A full analysis run description, read from a JSON config file.
struct RunConfig {
  CorpusPaths inputs;
  std::string census_date;
  CreditScheme scheme;
  ExclusionRules exclusion_rules;
  bool apply_exclusions = true;
  IndicatorOptions indicator_options;
  AverageSubset average_subset = AverageSubset::NonNil;
  std::string out_dir = "out";
  bool write_csv = true;
  bool write_json = false;
};

// Strict JSON: unknown keys are rejected. Paths are taken as written
// (relative paths resolve against the working directory).
RunConfig config_from_json(const std::string& text);
RunConfig config_from_file(const std::string& path);

// Hash of every setting that shapes the numbers. Output location and
// formats are deliberately left out so the same analysis written to two
// places carries the same stamp.
std::string config_hash(const RunConfig& config);

const char* rs_denominator_name(RsDenominator value);
const char* full_counting_name(FullCounting value);
const char* average_subset_name(AverageSubset value);

}  // namespace prodrank
