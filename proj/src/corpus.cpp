#include "prodrank/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <unordered_set>

#include "prodrank/csv.hpp"
#include "prodrank/errors.hpp"
#include "prodrank/hash.hpp"

namespace prodrank {

namespace {

const std::vector<std::string> kStaffHeader = {"researcher_id", "university_id",
                                               "sds_code"};
const std::vector<std::string> kPubHeader = {"pub_id", "year", "citations",
                                             "categories"};
const std::vector<std::string> kBylineHeader = {"pub_id", "position",
                                                "researcher_id", "university_id"};
const std::vector<std::string> kTaxonomyHeader = {"sds_code", "uda_code"};

bool parse_ll(const std::string& s, long long& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && !s.empty();
}

std::string at(const std::string& path, long line) {
  return path + ":" + std::to_string(line) + ": ";
}

}  // namespace

const std::string* Taxonomy::uda_of(const std::string& sds_code) const {
  for (const auto& e : entries) {
    if (e.sds_code == sds_code) return &e.uda_code;
  }
  return nullptr;
}

bool Taxonomy::has_sds(const std::string& sds_code) const {
  return uda_of(sds_code) != nullptr;
}

bool Taxonomy::has_uda(const std::string& uda_code) const {
  for (const auto& e : entries) {
    if (e.uda_code == uda_code) return true;
  }
  return false;
}

std::vector<std::string> Taxonomy::uda_codes() const {
  std::set<std::string> codes;
  for (const auto& e : entries) codes.insert(e.uda_code);
  return {codes.begin(), codes.end()};
}

StaffLookup::StaffLookup(const Corpus& corpus) {
  by_id_.reserve(corpus.roster.size());
  for (const auto& m : corpus.roster) {
    by_id_.emplace(m.researcher_id, &m);
  }
}

const StaffMember* StaffLookup::find(const std::string& researcher_id) const {
  auto it = by_id_.find(researcher_id);
  return it == by_id_.end() ? nullptr : it->second;
}

std::vector<Violation> validate(const Corpus& corpus) {
  std::vector<Violation> v;
  auto add = [&](std::string code, std::string message) {
    v.push_back({std::move(code), std::move(message)});
  };

  std::unordered_set<std::string> sds_seen;
  for (const auto& e : corpus.taxonomy.entries) {
    if (!sds_seen.insert(e.sds_code).second) {
      add("duplicate_sds", "duplicate sds_code '" + e.sds_code + "' in taxonomy");
    }
  }

  std::unordered_set<std::string> researcher_ids;
  for (const auto& m : corpus.roster) {
    if (!researcher_ids.insert(m.researcher_id).second) {
      add("duplicate_researcher_id",
          "duplicate researcher_id '" + m.researcher_id + "' in roster");
    }
    if (!sds_seen.count(m.sds_code)) {
      add("unknown_sds", "researcher '" + m.researcher_id +
                             "' assigned to unknown sds '" + m.sds_code + "'");
    }
  }

  StaffLookup lookup(corpus);
  std::unordered_set<std::string> pub_ids;
  for (const auto& pub : corpus.publications) {
    if (!pub_ids.insert(pub.pub_id).second) {
      add("duplicate_pub_id", "duplicate pub_id '" + pub.pub_id + "'");
    }
    if (pub.citations < 0) {
      add("negative_citations",
          "publication '" + pub.pub_id + "' has negative citation count");
    }
    if (pub.categories.empty()) {
      add("empty_categories",
          "publication '" + pub.pub_id + "' has no subject categories");
    } else {
      for (const auto& cat : pub.categories) {
        if (cat.empty()) {
          add("empty_categories", "publication '" + pub.pub_id +
                                      "' has an empty subject category");
          break;
        }
      }
    }

    const std::size_t n = pub.byline.size();
    if (n == 0) {
      add("empty_byline", "publication '" + pub.pub_id + "' has no byline");
      continue;
    }
    std::vector<int> positions;
    positions.reserve(n);
    for (const auto& slot : pub.byline) positions.push_back(slot.position);
    std::sort(positions.begin(), positions.end());
    bool dup = false;
    for (std::size_t i = 1; i < n; ++i) {
      if (positions[i] == positions[i - 1]) dup = true;
    }
    if (dup) {
      add("duplicate_position",
          "duplicate byline position for pub '" + pub.pub_id + "'");
    } else if (positions.front() != 1 || positions.back() != static_cast<int>(n)) {
      add("position_gap", "byline position gap for pub '" + pub.pub_id +
                              "' (positions must be exactly 1.." +
                              std::to_string(n) + ")");
    }

    std::unordered_set<std::string> seen_researchers;
    for (const auto& slot : pub.byline) {
      if (!slot.researcher_id) continue;
      if (!seen_researchers.insert(*slot.researcher_id).second) {
        add("duplicate_researcher_in_byline",
            "researcher '" + *slot.researcher_id +
                "' appears twice in byline of pub '" + pub.pub_id + "'");
        continue;
      }
      const StaffMember* m = lookup.find(*slot.researcher_id);
      if (m == nullptr) {
        add("unknown_researcher", "byline of pub '" + pub.pub_id +
                                      "' references unknown researcher '" +
                                      *slot.researcher_id + "'");
      } else if (!slot.university_id || *slot.university_id != m->university_id) {
        add("university_mismatch",
            "byline slot for researcher '" + *slot.researcher_id +
                "' in pub '" + pub.pub_id +
                "' does not carry the roster university '" + m->university_id +
                "'");
      }
    }
  }
  return v;
}

LoadResult load_corpus_checked(const CorpusPaths& paths,
                               std::string census_date) {
  LoadResult result;
  auto parse_violation = [&](const Error& e) {
    result.violations.push_back({"parse", e.what()});
  };

  Corpus corpus;
  corpus.census_date = std::move(census_date);

  try {
    for (const auto& row : csv::read_file(paths.taxonomy, kTaxonomyHeader)) {
      corpus.taxonomy.entries.push_back({row.fields[0], row.fields[1]});
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Parse) throw;
    parse_violation(e);
  }

  try {
    for (const auto& row : csv::read_file(paths.staff, kStaffHeader)) {
      corpus.roster.push_back({row.fields[0], row.fields[1], row.fields[2]});
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Parse) throw;
    parse_violation(e);
  }

  std::map<std::string, std::size_t> pub_index;
  std::set<std::string> dropped_pubs;  // rows lost to parse errors
  try {
    for (const auto& row : csv::read_file(paths.publications, kPubHeader)) {
      PublicationRecord pub;
      pub.pub_id = row.fields[0];
      long long year = 0, citations = 0;
      if (!parse_ll(row.fields[1], year)) {
        result.violations.push_back(
            {"parse", at(paths.publications, row.line) + "bad year '" +
                          row.fields[1] + "'"});
        dropped_pubs.insert(pub.pub_id);
        continue;
      }
      if (!parse_ll(row.fields[2], citations) || citations < 0) {
        result.violations.push_back(
            {"parse", at(paths.publications, row.line) +
                          "citations must be a non-negative integer, got '" +
                          row.fields[2] + "'"});
        dropped_pubs.insert(pub.pub_id);
        continue;
      }
      pub.year = static_cast<int>(year);
      pub.citations = citations;
      if (!row.fields[3].empty()) {
        pub.categories = csv::split(row.fields[3], ';');
      }
      // first occurrence wins the byline rows; duplicates surface in validate()
      pub_index.emplace(pub.pub_id, corpus.publications.size());
      corpus.publications.push_back(std::move(pub));
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Parse) throw;
    parse_violation(e);
  }

  try {
    for (const auto& row : csv::read_file(paths.byline, kBylineHeader)) {
      long long position = 0;
      if (!parse_ll(row.fields[1], position)) {
        result.violations.push_back(
            {"parse", at(paths.byline, row.line) + "bad position '" +
                          row.fields[1] + "'"});
        continue;
      }
      auto it = pub_index.find(row.fields[0]);
      if (it == pub_index.end()) {
        // rows of a publication already reported as a parse failure are
        // follow-on damage, not a second finding
        if (!dropped_pubs.count(row.fields[0])) {
          result.violations.push_back(
              {"unknown_pub_id", at(paths.byline, row.line) +
                                     "byline row references unknown pub_id '" +
                                     row.fields[0] + "'"});
        }
        continue;
      }
      AuthorSlot slot;
      slot.position = static_cast<int>(position);
      if (!row.fields[2].empty()) slot.researcher_id = row.fields[2];
      if (!row.fields[3].empty()) slot.university_id = row.fields[3];
      corpus.publications[it->second].byline.push_back(std::move(slot));
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Parse) throw;
    parse_violation(e);
  }

  if (!result.violations.empty()) {
    return result;  // incomplete parse; skip the integrity pass
  }

  for (auto& pub : corpus.publications) {
    std::stable_sort(
        pub.byline.begin(), pub.byline.end(),
        [](const AuthorSlot& a, const AuthorSlot& b) { return a.position < b.position; });
  }

  auto violations = validate(corpus);
  if (!violations.empty()) {
    result.violations = std::move(violations);
    return result;
  }
  result.corpus = std::move(corpus);
  return result;
}

Corpus load_corpus(const CorpusPaths& paths, std::string census_date) {
  LoadResult result = load_corpus_checked(paths, std::move(census_date));
  if (!result.corpus) {
    const Violation& first = result.violations.front();
    ErrorKind kind =
        first.code == "parse" ? ErrorKind::Parse : ErrorKind::Integrity;
    fail(kind, first.code + ": " + first.message);
  }
  return std::move(*result.corpus);
}

namespace {

std::string render_taxonomy(const Corpus& c) {
  std::string out = csv::join(kTaxonomyHeader, ',') + "\n";
  for (const auto& e : c.taxonomy.entries) {
    out += e.sds_code + "," + e.uda_code + "\n";
  }
  return out;
}

std::string render_staff(const Corpus& c) {
  std::string out = csv::join(kStaffHeader, ',') + "\n";
  for (const auto& m : c.roster) {
    out += m.researcher_id + "," + m.university_id + "," + m.sds_code + "\n";
  }
  return out;
}

std::string render_publications(const Corpus& c) {
  std::string out = csv::join(kPubHeader, ',') + "\n";
  for (const auto& p : c.publications) {
    out += p.pub_id + "," + std::to_string(p.year) + "," +
           std::to_string(p.citations) + "," + csv::join(p.categories, ';') +
           "\n";
  }
  return out;
}

std::string render_byline(const Corpus& c) {
  std::string out = csv::join(kBylineHeader, ',') + "\n";
  for (const auto& p : c.publications) {
    std::vector<const AuthorSlot*> slots;
    slots.reserve(p.byline.size());
    for (const auto& s : p.byline) slots.push_back(&s);
    std::sort(slots.begin(), slots.end(),
              [](const AuthorSlot* a, const AuthorSlot* b) {
                return a->position < b->position;
              });
    for (const AuthorSlot* s : slots) {
      out += p.pub_id + "," + std::to_string(s->position) + "," +
             (s->researcher_id ? *s->researcher_id : "") + "," +
             (s->university_id ? *s->university_id : "") + "\n";
    }
  }
  return out;
}

void check_csv_safe(const Corpus& c) {
  auto bad = [](const std::string& s) {
    return s.find(',') != std::string::npos ||
           s.find(';') != std::string::npos ||
           s.find('\n') != std::string::npos;
  };
  for (const auto& e : c.taxonomy.entries) {
    if (bad(e.sds_code) || bad(e.uda_code)) {
      fail(ErrorKind::Domain, "taxonomy code contains a separator character");
    }
  }
  for (const auto& m : c.roster) {
    if (bad(m.researcher_id) || bad(m.university_id) || bad(m.sds_code)) {
      fail(ErrorKind::Domain, "roster identifier contains a separator character");
    }
  }
  for (const auto& p : c.publications) {
    if (bad(p.pub_id)) {
      fail(ErrorKind::Domain, "pub_id contains a separator character");
    }
    for (const auto& cat : p.categories) {
      if (bad(cat)) {
        fail(ErrorKind::Domain, "category contains a separator character");
      }
    }
  }
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorKind::Io, "write failure on " + path.string());
}

}  // namespace

void write_corpus(const Corpus& corpus, const std::string& dir) {
  check_csv_safe(corpus);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create directory " + dir);
  std::filesystem::path base(dir);
  write_text(base / "taxonomy.csv", render_taxonomy(corpus));
  write_text(base / "staff.csv", render_staff(corpus));
  write_text(base / "publications.csv", render_publications(corpus));
  write_text(base / "byline.csv", render_byline(corpus));
}

std::string corpus_digest(const Corpus& corpus) {
  std::string blob = "census:" + corpus.census_date + "\n";
  blob += render_taxonomy(corpus);
  blob += render_staff(corpus);
  blob += render_publications(corpus);
  blob += render_byline(corpus);
  return fnv1a64_hex(blob);
}

namespace {

// Researcher ids that appear (resolved) on at least one byline.
std::unordered_set<std::string> publishing_ids(const Corpus& corpus) {
  std::unordered_set<std::string> out;
  for (const auto& pub : corpus.publications) {
    for (const auto& slot : pub.byline) {
      if (slot.researcher_id) out.insert(*slot.researcher_id);
    }
  }
  return out;
}

}  // namespace

std::pair<Corpus, ExclusionReport> apply_exclusions(const Corpus& corpus,
                                                    const ExclusionRules& rules) {
  if (rules.min_publishing_fraction < 0.0 || rules.min_publishing_fraction > 1.0) {
    fail(ErrorKind::Params, "min_publishing_fraction must lie in [0,1]");
  }
  if (rules.min_universities < 1) {
    fail(ErrorKind::Params, "min_universities must be a positive integer");
  }

  auto publishing = publishing_ids(corpus);

  struct SdsStats {
    int staff = 0;
    int staff_publishing = 0;
    std::set<std::string> universities;
  };
  std::map<std::string, SdsStats> stats;
  for (const auto& e : corpus.taxonomy.entries) stats[e.sds_code];
  for (const auto& m : corpus.roster) {
    auto& s = stats[m.sds_code];
    s.staff += 1;
    if (publishing.count(m.researcher_id)) s.staff_publishing += 1;
    s.universities.insert(m.university_id);
  }

  ExclusionReport report;
  std::set<std::string> removed;
  for (const auto& e : corpus.taxonomy.entries) {
    const SdsStats& s = stats[e.sds_code];
    double fraction =
        s.staff > 0 ? static_cast<double>(s.staff_publishing) / s.staff : 0.0;
    int span = static_cast<int>(s.universities.size());
    std::vector<std::string> triggered;
    if (fraction < rules.min_publishing_fraction) {
      triggered.push_back("publishing_fraction");
    }
    if (span < rules.min_universities) {
      triggered.push_back("university_span");
    }
    if (triggered.empty()) {
      report.retained.push_back(e.sds_code);
    } else {
      removed.insert(e.sds_code);
      report.excluded.push_back({e.sds_code, std::move(triggered), fraction, span});
    }
  }
  std::sort(report.retained.begin(), report.retained.end());

  Corpus out;
  out.census_date = corpus.census_date;
  for (const auto& e : corpus.taxonomy.entries) {
    if (!removed.count(e.sds_code)) out.taxonomy.entries.push_back(e);
  }
  std::unordered_set<std::string> removed_researchers;
  for (const auto& m : corpus.roster) {
    if (removed.count(m.sds_code)) {
      removed_researchers.insert(m.researcher_id);
    } else {
      out.roster.push_back(m);
    }
  }
  out.publications = corpus.publications;
  for (auto& pub : out.publications) {
    for (auto& slot : pub.byline) {
      if (slot.researcher_id && removed_researchers.count(*slot.researcher_id)) {
        slot.researcher_id.reset();  // keeps the university, drops the credit
      }
    }
  }
  return {std::move(out), std::move(report)};
}

std::set<UniversitySds> non_nil_subset(const Corpus& corpus, Basis basis) {
  StaffLookup lookup(corpus);
  std::set<UniversitySds> out;
  for (const auto& pub : corpus.publications) {
    if (basis == Basis::Impact && pub.citations < 1) continue;
    for (const auto& slot : pub.byline) {
      if (!slot.researcher_id) continue;
      const StaffMember* m = lookup.find(*slot.researcher_id);
      if (m) out.insert({m->university_id, m->sds_code});
    }
  }
  return out;
}

int research_staff_count(const Corpus& corpus, const std::string& university_id,
                         const std::string& scope_code) {
  int count = 0;
  if (corpus.taxonomy.has_sds(scope_code)) {
    for (const auto& m : corpus.roster) {
      if (m.university_id == university_id && m.sds_code == scope_code) ++count;
    }
    return count;
  }
  if (corpus.taxonomy.has_uda(scope_code)) {
    for (const auto& m : corpus.roster) {
      if (m.university_id != university_id) continue;
      const std::string* uda = corpus.taxonomy.uda_of(m.sds_code);
      if (uda && *uda == scope_code) ++count;
    }
    return count;
  }
  fail(ErrorKind::Lookup, "unknown scope code '" + scope_code + "'");
}

CorpusSummary summarize(const Corpus& corpus) {
  StaffLookup lookup(corpus);
  auto publishing = publishing_ids(corpus);

  std::map<std::string, UdaSummary> per_uda;
  for (const auto& uda : corpus.taxonomy.uda_codes()) {
    per_uda[uda].uda_code = uda;
  }

  std::map<std::string, std::set<std::string>> active_sds;
  for (const auto& m : corpus.roster) {
    const std::string* uda = corpus.taxonomy.uda_of(m.sds_code);
    if (!uda) continue;  // unknown sds is a validation problem, not ours
    auto& row = per_uda[*uda];
    row.staff_total += 1;
    if (publishing.count(m.researcher_id)) row.staff_publishing += 1;
    active_sds[*uda].insert(m.sds_code);
  }
  for (auto& [uda, sdss] : active_sds) {
    per_uda[uda].n_sds = static_cast<int>(sdss.size());
  }

  UdaSummary total;
  total.uda_code = "TOTAL";
  std::map<std::string, std::set<std::string>> unis_output, unis_impact;
  std::set<std::string> total_unis_output, total_unis_impact;
  for (const auto& pub : corpus.publications) {
    std::set<std::string> udas_of_pub;
    std::set<std::pair<std::string, std::string>> uda_unis;
    for (const auto& slot : pub.byline) {
      if (!slot.researcher_id) continue;
      const StaffMember* m = lookup.find(*slot.researcher_id);
      if (!m) continue;
      const std::string* uda = corpus.taxonomy.uda_of(m->sds_code);
      if (!uda) continue;
      udas_of_pub.insert(*uda);
      uda_unis.insert({*uda, m->university_id});
    }
    if (udas_of_pub.empty()) continue;
    for (const auto& uda : udas_of_pub) {
      auto& row = per_uda[uda];
      row.publications += 1;
      row.citations += pub.citations;
    }
    for (const auto& [uda, uni] : uda_unis) {
      unis_output[uda].insert(uni);
      total_unis_output.insert(uni);
      if (pub.citations >= 1) {
        unis_impact[uda].insert(uni);
        total_unis_impact.insert(uni);
      }
    }
    total.publications += 1;
    total.citations += pub.citations;
  }

  CorpusSummary summary;
  for (auto& [uda, row] : per_uda) {
    row.universities_output = static_cast<int>(unis_output[uda].size());
    row.universities_impact = static_cast<int>(unis_impact[uda].size());
    total.n_sds += row.n_sds;
    total.staff_total += row.staff_total;
    total.staff_publishing += row.staff_publishing;
    summary.per_uda.push_back(row);
  }
  total.universities_output = static_cast<int>(total_unis_output.size());
  total.universities_impact = static_cast<int>(total_unis_impact.size());
  summary.total = total;
  return summary;
}

}  // namespace prodrank
