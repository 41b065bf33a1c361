#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prodrank/corpus.hpp"

namespace prodrank {

// Shape of one synthetic field: which discipline it belongs to, its subject
// categories, and the roster size range per university.
struct SdsSpec {
  std::string sds_code;
  std::string uda_code;
  std::vector<std::string> categories;  // defaults to {sds_code} when empty
  int staff_min = 2;
  int staff_max = 8;
};

struct BylineShape {
  int min = 1;
  int max = 12;
  double mean = 4.0;
};

struct SynthParams {
  std::uint64_t seed = 1;
  int n_universities = 10;
  std::string census_date = "2026-01-01";
  int year_min = 2004;
  int year_max = 2008;
  std::vector<SdsSpec> sds;
  double pubs_per_researcher_mean = 2.5;
  int pubs_dispersion = 4;  // larger = tighter spread of per-head output
  BylineShape byline;
  double intramural_probability = 0.5;
  double external_author_rate = 0.3;
  double citation_mean = 6.0;
  int citation_dispersion = 1;  // 1 gives the heavy citation tail
  int categories_per_pub = 1;   // capped at the field's category count
  double publishing_rate = 0.9;  // staff share that publishes at all
  double known_external_university_rate = 0.5;  // outside authors with a
                                                // known affiliation

  void validate() const;  // throws Params
};

SynthParams default_params();

// Strict JSON: unknown keys are rejected so typos cannot silently fall
// back to defaults.
SynthParams params_from_json(const std::string& text);
std::string params_to_json(const SynthParams& params);

// Deterministic: one splitmix64 stream consumed in a fixed order, so equal
// params give identical corpora on every platform. Bylines are built so
// that a publication drawn intramural carries the lead university on both
// end positions, and one drawn extramural gets ends that cannot match.
Corpus generate_corpus(const SynthParams& params);

}  // namespace prodrank
