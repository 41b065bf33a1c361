#include "prodrank/synth.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "prodrank/errors.hpp"
#include "prodrank/prng.hpp"

namespace prodrank {

namespace {

std::string padded(const char* prefix, int width, long long n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*lld", prefix, width, n);
  return buf;
}

void check_rate(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    fail(ErrorKind::Params, std::string(name) + " must lie in [0,1]");
  }
}

}  // namespace

void SynthParams::validate() const {
  if (n_universities < 1 || n_universities > 999) {
    fail(ErrorKind::Params, "n_universities must lie in 1..999");
  }
  if (census_date.empty()) {
    fail(ErrorKind::Params, "census_date must not be empty");
  }
  if (year_min > year_max) {
    fail(ErrorKind::Params, "years.min must not exceed years.max");
  }
  if (byline.min < 1 || byline.max < byline.min) {
    fail(ErrorKind::Params, "byline bounds need 1 <= min <= max");
  }
  if (!(byline.mean >= byline.min && byline.mean <= byline.max)) {
    fail(ErrorKind::Params, "byline.mean must lie between min and max");
  }
  if (pubs_per_researcher_mean < 0.0 || citation_mean < 0.0) {
    fail(ErrorKind::Params, "means must be non-negative");
  }
  if (citation_dispersion < 1 || pubs_dispersion < 1) {
    fail(ErrorKind::Params, "dispersions must be at least 1");
  }
  if (categories_per_pub < 1) {
    fail(ErrorKind::Params, "categories_per_pub must be at least 1");
  }
  check_rate(intramural_probability, "intramural_probability");
  check_rate(external_author_rate, "external_author_rate");
  check_rate(publishing_rate, "publishing_rate");
  check_rate(known_external_university_rate, "known_external_university_rate");
  if (sds.empty()) {
    fail(ErrorKind::Params, "at least one sds entry is required");
  }
  std::set<std::string> codes;
  for (const auto& spec : sds) {
    if (spec.sds_code.empty() || spec.uda_code.empty()) {
      fail(ErrorKind::Params, "sds_code and uda_code must not be empty");
    }
    if (!codes.insert(spec.sds_code).second) {
      fail(ErrorKind::Params, "duplicate sds_code '" + spec.sds_code + "'");
    }
    for (const auto& cat : spec.categories) {
      if (cat.empty()) {
        fail(ErrorKind::Params,
             "sds '" + spec.sds_code + "' has an empty category");
      }
    }
    if (spec.staff_min < 0 || spec.staff_max < spec.staff_min) {
      fail(ErrorKind::Params,
           "sds '" + spec.sds_code + "' needs 0 <= staff_min <= staff_max");
    }
  }
}

SynthParams default_params() {
  SynthParams p;
  const char* life_cats[] = {"biochemistry", "genetics", "ecology",
                             "microbiology", "physiology", "zoology"};
  const char* phys_cats[] = {"optics", "condensed matter", "particle physics",
                             "astrophysics", "acoustics", "plasma physics"};
  for (int k = 0; k < 3; ++k) {
    SdsSpec s;
    s.sds_code = padded("LIFE/", 2, k + 1);
    s.uda_code = "LIFE";
    s.categories = {life_cats[2 * k], life_cats[2 * k + 1]};
    p.sds.push_back(std::move(s));
  }
  for (int k = 0; k < 3; ++k) {
    SdsSpec s;
    s.sds_code = padded("PHYS/", 2, k + 1);
    s.uda_code = "PHYS";
    s.categories = {phys_cats[2 * k], phys_cats[2 * k + 1]};
    p.sds.push_back(std::move(s));
  }
  return p;
}

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

}  // namespace

SynthParams params_from_json(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Params, std::string("params are not valid JSON: ") + e.what());
  }

  check_keys(root,
             {"seed", "n_universities", "census_date", "years", "sds",
              "pubs_per_researcher", "byline", "intramural_probability",
              "external_author_rate", "citations", "categories_per_pub",
              "publishing_rate", "known_external_university_rate"},
             "params");

  SynthParams defaults;
  SynthParams p;
  p.seed = get_as<std::uint64_t>(root, "seed", defaults.seed, "params");
  p.n_universities =
      get_as<int>(root, "n_universities", defaults.n_universities, "params");
  p.census_date =
      get_as<std::string>(root, "census_date", defaults.census_date, "params");
  if (root.contains("years")) {
    const auto& years = root.at("years");
    check_keys(years, {"min", "max"}, "years");
    p.year_min = get_as<int>(years, "min", defaults.year_min, "years");
    p.year_max = get_as<int>(years, "max", defaults.year_max, "years");
  }
  if (root.contains("pubs_per_researcher")) {
    const auto& pubs = root.at("pubs_per_researcher");
    check_keys(pubs, {"mean", "dispersion"}, "pubs_per_researcher");
    p.pubs_per_researcher_mean =
        get_as<double>(pubs, "mean", defaults.pubs_per_researcher_mean,
                       "pubs_per_researcher");
    p.pubs_dispersion = get_as<int>(pubs, "dispersion",
                                    defaults.pubs_dispersion,
                                    "pubs_per_researcher");
  }
  if (root.contains("byline")) {
    const auto& byline = root.at("byline");
    check_keys(byline, {"min", "max", "mean"}, "byline");
    p.byline.min = get_as<int>(byline, "min", defaults.byline.min, "byline");
    p.byline.max = get_as<int>(byline, "max", defaults.byline.max, "byline");
    p.byline.mean =
        get_as<double>(byline, "mean", defaults.byline.mean, "byline");
  }
  if (root.contains("citations")) {
    const auto& citations = root.at("citations");
    check_keys(citations, {"mean", "dispersion"}, "citations");
    p.citation_mean =
        get_as<double>(citations, "mean", defaults.citation_mean, "citations");
    p.citation_dispersion = get_as<int>(
        citations, "dispersion", defaults.citation_dispersion, "citations");
  }
  p.intramural_probability =
      get_as<double>(root, "intramural_probability",
                     defaults.intramural_probability, "params");
  p.external_author_rate = get_as<double>(
      root, "external_author_rate", defaults.external_author_rate, "params");
  p.categories_per_pub = get_as<int>(root, "categories_per_pub",
                                     defaults.categories_per_pub, "params");
  p.publishing_rate =
      get_as<double>(root, "publishing_rate", defaults.publishing_rate,
                     "params");
  p.known_external_university_rate =
      get_as<double>(root, "known_external_university_rate",
                     defaults.known_external_university_rate, "params");

  if (!root.contains("sds")) {
    fail(ErrorKind::Params, "params need an 'sds' array");
  }
  const auto& sds = root.at("sds");
  if (!sds.is_array()) {
    fail(ErrorKind::Params, "'sds' must be an array");
  }
  SdsSpec spec_defaults;
  for (const auto& entry : sds) {
    check_keys(entry,
               {"sds_code", "uda_code", "categories", "staff_min", "staff_max"},
               "sds entry");
    if (!entry.contains("sds_code") || !entry.contains("uda_code")) {
      fail(ErrorKind::Params, "each sds entry needs sds_code and uda_code");
    }
    SdsSpec spec;
    spec.sds_code = get_as<std::string>(entry, "sds_code", "", "sds entry");
    spec.uda_code = get_as<std::string>(entry, "uda_code", "", "sds entry");
    spec.categories = get_as<std::vector<std::string>>(
        entry, "categories", spec_defaults.categories, "sds entry");
    spec.staff_min =
        get_as<int>(entry, "staff_min", spec_defaults.staff_min, "sds entry");
    spec.staff_max =
        get_as<int>(entry, "staff_max", spec_defaults.staff_max, "sds entry");
    p.sds.push_back(std::move(spec));
  }

  p.validate();
  return p;
}

std::string params_to_json(const SynthParams& params) {
  ordered_json root;
  root["seed"] = params.seed;
  root["n_universities"] = params.n_universities;
  root["census_date"] = params.census_date;
  root["years"] = {{"min", params.year_min}, {"max", params.year_max}};
  root["pubs_per_researcher"] = {{"mean", params.pubs_per_researcher_mean},
                                 {"dispersion", params.pubs_dispersion}};
  root["byline"] = {{"min", params.byline.min},
                    {"max", params.byline.max},
                    {"mean", params.byline.mean}};
  root["citations"] = {{"mean", params.citation_mean},
                       {"dispersion", params.citation_dispersion}};
  root["intramural_probability"] = params.intramural_probability;
  root["external_author_rate"] = params.external_author_rate;
  root["categories_per_pub"] = params.categories_per_pub;
  root["publishing_rate"] = params.publishing_rate;
  root["known_external_university_rate"] =
      params.known_external_university_rate;
  root["sds"] = ordered_json::array();
  for (const auto& spec : params.sds) {
    ordered_json entry;
    entry["sds_code"] = spec.sds_code;
    entry["uda_code"] = spec.uda_code;
    entry["categories"] = spec.categories;
    entry["staff_min"] = spec.staff_min;
    entry["staff_max"] = spec.staff_max;
    root["sds"].push_back(std::move(entry));
  }
  return root.dump(2) + "\n";
}

namespace {

// Byline construction state shared by the slot-filling helpers.
struct BylineBuilder {
  SplitMix64& rng;
  const SynthParams& params;
  const std::vector<StaffMember>& roster;
  const std::map<std::string, std::vector<std::size_t>>& by_university;
  std::unordered_set<std::string> used;

  // Outside author; affiliation known only sometimes. Never a roster member,
  // since the X prefix cannot collide with university ids.
  AuthorSlot outside(int pos) {
    AuthorSlot slot;
    slot.position = pos;
    if (rng.next_double() < params.known_external_university_rate) {
      slot.university_id = padded("X", 3, 1 + static_cast<long long>(rng.below(50)));
    }
    return slot;
  }

  AuthorSlot member_slot(int pos, const StaffMember& m) {
    used.insert(m.researcher_id);
    AuthorSlot slot;
    slot.position = pos;
    slot.researcher_id = m.researcher_id;
    slot.university_id = m.university_id;
    return slot;
  }

  // Roster member of the given university; falls back to a researcher-less
  // slot of that university, which preserves the intended classification.
  AuthorSlot same_university(int pos, const std::string& university_id) {
    auto it = by_university.find(university_id);
    if (it != by_university.end()) {
      for (int attempt = 0; attempt < 16; ++attempt) {
        const StaffMember& m =
            roster[it->second[rng.below(it->second.size())]];
        if (!used.count(m.researcher_id)) return member_slot(pos, m);
      }
    }
    AuthorSlot slot;
    slot.position = pos;
    slot.university_id = university_id;
    return slot;
  }

  // Roster member of any other university; falls back to an outside author
  // with a known X-affiliation, which can never match a university id.
  AuthorSlot different_university(int pos, const std::string& university_id) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      const StaffMember& m = roster[rng.below(roster.size())];
      if (m.university_id == university_id) continue;
      if (used.count(m.researcher_id)) continue;
      return member_slot(pos, m);
    }
    AuthorSlot slot;
    slot.position = pos;
    slot.university_id = padded("X", 3, 1 + static_cast<long long>(rng.below(50)));
    return slot;
  }

  AuthorSlot generic(int pos) {
    if (rng.next_double() < params.external_author_rate) {
      return outside(pos);
    }
    for (int attempt = 0; attempt < 16; ++attempt) {
      const StaffMember& m = roster[rng.below(roster.size())];
      if (used.count(m.researcher_id)) continue;
      return member_slot(pos, m);
    }
    AuthorSlot slot;
    slot.position = pos;
    return slot;
  }
};

}  // namespace

Corpus generate_corpus(const SynthParams& params) {
  params.validate();
  SplitMix64 rng(params.seed);

  Corpus corpus;
  corpus.census_date = params.census_date;
  for (const auto& spec : params.sds) {
    corpus.taxonomy.entries.push_back({spec.sds_code, spec.uda_code});
  }

  // Roster: fields in given order, universities in id order inside each.
  std::vector<std::size_t> member_spec;
  long long next_researcher = 1;
  for (std::size_t si = 0; si < params.sds.size(); ++si) {
    const SdsSpec& spec = params.sds[si];
    const std::uint64_t span =
        static_cast<std::uint64_t>(spec.staff_max - spec.staff_min) + 1;
    for (int u = 1; u <= params.n_universities; ++u) {
      const int count = spec.staff_min + static_cast<int>(rng.below(span));
      for (int k = 0; k < count; ++k) {
        if (next_researcher > 999999) {
          fail(ErrorKind::Params, "roster exceeds the id space");
        }
        corpus.roster.push_back({padded("R", 6, next_researcher++),
                                 padded("U", 3, u), spec.sds_code});
        member_spec.push_back(si);
      }
    }
  }
  if (corpus.roster.empty()) {
    fail(ErrorKind::Params, "params produced an empty roster");
  }

  std::map<std::string, std::vector<std::size_t>> by_university;
  for (std::size_t k = 0; k < corpus.roster.size(); ++k) {
    by_university[corpus.roster[k].university_id].push_back(k);
  }

  const int byline_span = params.byline.max - params.byline.min;
  const double byline_p =
      byline_span > 0 ? (params.byline.mean - params.byline.min) / byline_span
                      : 0.0;

  long long next_pub = 1;
  for (std::size_t mi = 0; mi < corpus.roster.size(); ++mi) {
    const StaffMember& lead = corpus.roster[mi];
    const SdsSpec& spec = params.sds[member_spec[mi]];
    if (rng.next_double() >= params.publishing_rate) continue;
    const long long pubs = rng.negative_binomial(
        params.pubs_per_researcher_mean, params.pubs_dispersion);
    for (long long pk = 0; pk < pubs; ++pk) {
      if (next_pub > 999999) {
        fail(ErrorKind::Params, "publications exceed the id space");
      }
      PublicationRecord pub;
      pub.pub_id = padded("P", 6, next_pub++);
      pub.year = params.year_min +
                 static_cast<int>(rng.below(static_cast<std::uint64_t>(
                     params.year_max - params.year_min) + 1));
      pub.citations =
          rng.negative_binomial(params.citation_mean, params.citation_dispersion);

      const std::vector<std::string>& cats =
          spec.categories.empty() ? std::vector<std::string>{spec.sds_code}
                                  : spec.categories;
      const std::size_t ncats = cats.size();
      const std::size_t take =
          std::min<std::size_t>(params.categories_per_pub, ncats);
      std::vector<std::size_t> pool(ncats);
      for (std::size_t k = 0; k < ncats; ++k) pool[k] = k;
      for (std::size_t k = 0; k < take; ++k) {
        const std::size_t j =
            k + static_cast<std::size_t>(rng.below(ncats - k));
        std::swap(pool[k], pool[j]);
        pub.categories.push_back(cats[pool[k]]);
      }

      const int length = params.byline.min + rng.binomial(byline_span, byline_p);
      const int lead_pos =
          1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(length)));
      const bool intramural =
          rng.next_double() < params.intramural_probability;

      BylineBuilder builder{rng, params, corpus.roster, by_university, {}};
      builder.used.insert(lead.researcher_id);
      for (int pos = 1; pos <= length; ++pos) {
        if (pos == lead_pos) {
          AuthorSlot slot;
          slot.position = pos;
          slot.researcher_id = lead.researcher_id;
          slot.university_id = lead.university_id;
          pub.byline.push_back(std::move(slot));
          continue;
        }
        const bool end_pos = pos == 1 || pos == length;
        if (intramural && end_pos) {
          pub.byline.push_back(builder.same_university(pos, lead.university_id));
        } else if (!intramural && end_pos) {
          // The second end must not match the first. When the lead holds an
          // end, the other one is forced away from the lead university;
          // otherwise position 1 was filled generically and the last slot is
          // forced away from whatever it resolved to (or filled generically
          // when position 1 is an unknown outsider, which already settles
          // the classification).
          if (lead_pos == 1 || lead_pos == length) {
            pub.byline.push_back(
                builder.different_university(pos, lead.university_id));
          } else if (pos == 1) {
            pub.byline.push_back(builder.generic(pos));
          } else {
            const auto& first_university = pub.byline.front().university_id;
            if (first_university) {
              pub.byline.push_back(
                  builder.different_university(pos, *first_university));
            } else {
              pub.byline.push_back(builder.generic(pos));
            }
          }
        } else {
          pub.byline.push_back(builder.generic(pos));
        }
      }
      corpus.publications.push_back(std::move(pub));
    }
  }
  return corpus;
}

}  // namespace prodrank
