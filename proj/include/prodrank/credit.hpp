#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "prodrank/corpus.hpp"

namespace prodrank {

enum class CollaborationClass { Intramural, Extramural };

// Byline-position credit weights. Ends dominate; for extramural work the
// positions adjacent to the ends carry their own weight. Whatever is left
// is shared equally by the interior, and when there is no interior the
// assigned weights are rescaled to sum to one.
struct CreditScheme {
  double intramural_end = 0.40;
  double extramural_end = 0.30;
  double extramural_adjacent = 0.15;
  bool uniform = false;  // degenerate 1/n scheme, ignores the weights above

  // Throws Params on weights that cannot yield a unit-sum byline.
  void validate() const;
};

CreditScheme uniform_scheme();

// Intramural iff the first and last byline slots carry the same known
// university. An unknown university on either end is treated as outside.
CollaborationClass classify_collaboration(const PublicationRecord& pub);

// Weight of each byline position for a byline of length n. Sums to 1.
std::vector<double> position_weights(std::size_t n, CollaborationClass cls,
                                     const CreditScheme& scheme);

// Sum of position weights over byline slots held by roster members of the
// given university and field.
double weighted_fraction(const PublicationRecord& pub,
                         const std::string& university_id,
                         const std::string& sds_code, const StaffLookup& lookup,
                         const CreditScheme& scheme);

// Straight 1/n share per matching author.
double plain_fraction(const PublicationRecord& pub,
                      const std::string& university_id,
                      const std::string& sds_code, const StaffLookup& lookup);

// Number of byline slots held by roster members of the university and field.
int full_author_count(const PublicationRecord& pub,
                      const std::string& university_id,
                      const std::string& sds_code, const StaffLookup& lookup);

// True when the university and field appear in the byline at all.
bool full_share(const PublicationRecord& pub, const std::string& university_id,
                const std::string& sds_code, const StaffLookup& lookup);

}  // namespace prodrank
