#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace prodrank {

// Field taxonomy. Every fine-grained field (SDS) belongs to exactly one
// discipline (UDA); researchers are classified into exactly one SDS.
struct TaxonomyEntry {
  std::string sds_code;
  std::string uda_code;
  bool operator==(const TaxonomyEntry&) const = default;
};

struct Taxonomy {
  std::vector<TaxonomyEntry> entries;
  bool operator==(const Taxonomy&) const = default;

  const std::string* uda_of(const std::string& sds_code) const;
  bool has_sds(const std::string& sds_code) const;
  bool has_uda(const std::string& uda_code) const;
  std::vector<std::string> uda_codes() const;  // sorted, unique
};

struct StaffMember {
  std::string researcher_id;
  std::string university_id;
  std::string sds_code;
  bool operator==(const StaffMember&) const = default;
};

// One byline position. Slots without a researcher_id are authors outside
// the roster (external or foreign co-authors); such a slot may still carry
// a university when the affiliation is known. Unresolved slots absorb
// positional weight but never receive institutional credit.
struct AuthorSlot {
  int position = 0;  // 1-based
  std::optional<std::string> researcher_id;
  std::optional<std::string> university_id;
  bool operator==(const AuthorSlot&) const = default;
};

struct PublicationRecord {
  std::string pub_id;
  int year = 0;
  std::vector<std::string> categories;  // subject categories, non-empty
  long long citations = 0;              // count at census date
  std::vector<AuthorSlot> byline;       // positions are exactly 1..n
  bool operator==(const PublicationRecord&) const = default;
};

struct Corpus {
  Taxonomy taxonomy;
  std::vector<StaffMember> roster;
  std::vector<PublicationRecord> publications;
  std::string census_date;  // metadata only
  bool operator==(const Corpus&) const = default;
};

// Fast researcher_id -> StaffMember resolution. Holds pointers into the
// corpus roster, so the corpus must outlive the lookup.
class StaffLookup {
 public:
  explicit StaffLookup(const Corpus& corpus);
  const StaffMember* find(const std::string& researcher_id) const;

 private:
  std::unordered_map<std::string, const StaffMember*> by_id_;
};

struct Violation {
  std::string code;     // "parse", "duplicate_pub_id", "position_gap", ...
  std::string message;  // human-readable; carries file:line when known
};

struct LoadResult {
  std::optional<Corpus> corpus;  // present iff violations is empty
  std::vector<Violation> violations;
};

struct CorpusPaths {
  std::string staff;
  std::string publications;
  std::string byline;
  std::string taxonomy;
};

// Collecting loader: parses all four files and runs the full validation
// pass, accumulating violations instead of stopping at the first one.
// I/O failures still throw (ErrorKind::Io).
LoadResult load_corpus_checked(const CorpusPaths& paths,
                               std::string census_date = "");

// Throwing variant: returns the corpus or raises Parse/Integrity carrying
// the first violation message.
Corpus load_corpus(const CorpusPaths& paths, std::string census_date = "");

// Re-checks every type invariant on an in-memory corpus.
std::vector<Violation> validate(const Corpus& corpus);

// Writes the four corpus CSV files into dir (created if needed).
void write_corpus(const Corpus& corpus, const std::string& dir);

// Canonical serialization of the corpus content, hashed for report headers.
std::string corpus_digest(const Corpus& corpus);

// ---------------------------------------------------------------------------
// Dataset-construction rules and derived counts

struct ExclusionRules {
  double min_publishing_fraction = 0.5;  // of national SDS staff with >= 1 pub
  int min_universities = 8;              // distinct universities per SDS
};

struct ExcludedSds {
  std::string sds_code;
  std::vector<std::string> rules;  // "publishing_fraction", "university_span"
  double publishing_fraction = 0.0;
  int university_span = 0;
};

struct ExclusionReport {
  std::vector<ExcludedSds> excluded;
  std::vector<std::string> retained;  // sorted sds codes
};

// Drops every SDS whose national publishing fraction falls below the
// threshold or whose staff spans fewer than min_universities universities.
// Staff of dropped fields leave the roster; their byline slots keep the
// university and lose the roster reference. Publications stay put, so
// citation baselines still see the whole national output.
std::pair<Corpus, ExclusionReport> apply_exclusions(const Corpus& corpus,
                                                    const ExclusionRules& rules);

enum class Basis { Output, Impact };

using UniversitySds = std::pair<std::string, std::string>;

// (university, sds) pairs with at least one publication (Output) or at
// least one cited publication (Impact). The impact subset is always
// contained in the output subset.
std::set<UniversitySds> non_nil_subset(const Corpus& corpus, Basis basis);

// Distinct roster members of the university in the given SDS or UDA code.
// Unknown codes raise ErrorKind::Lookup.
int research_staff_count(const Corpus& corpus, const std::string& university_id,
                         const std::string& scope_code);

struct UdaSummary {
  std::string uda_code;
  int n_sds = 0;             // SDSs of the UDA with at least one roster member
  int staff_total = 0;       // full roster headcount
  int staff_publishing = 0;  // roster members with at least one publication
  long long publications = 0;
  long long citations = 0;
  int universities_output = 0;  // with >= 1 publication in the UDA
  int universities_impact = 0;  // with >= 1 cited publication in the UDA
};

// Per-UDA counts plus a cross-UDA deduplicated total row. A publication is
// attributed to every UDA that has a roster author on its byline, so the
// total publication count can be smaller than the column sum.
struct CorpusSummary {
  std::vector<UdaSummary> per_uda;  // sorted by uda_code
  UdaSummary total;                 // uda_code = "TOTAL"
};

CorpusSummary summarize(const Corpus& corpus);

}  // namespace prodrank
