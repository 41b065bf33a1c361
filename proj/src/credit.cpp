#include "prodrank/credit.hpp"

#include <cmath>

#include "prodrank/errors.hpp"

namespace prodrank {

void CreditScheme::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(intramural_end) || !finite(extramural_end) ||
      !finite(extramural_adjacent)) {
    fail(ErrorKind::Params, "credit weights must be finite");
  }
  if (intramural_end <= 0.0 || extramural_end <= 0.0) {
    fail(ErrorKind::Params, "end weights must be positive");
  }
  if (extramural_adjacent < 0.0) {
    fail(ErrorKind::Params, "adjacent weight must be non-negative");
  }
  if (2.0 * intramural_end > 1.0) {
    fail(ErrorKind::Params,
         "intramural end weights exceed the whole publication");
  }
  if (2.0 * (extramural_end + extramural_adjacent) > 1.0) {
    fail(ErrorKind::Params,
         "extramural end and adjacent weights exceed the whole publication");
  }
}

CreditScheme uniform_scheme() {
  CreditScheme s;
  s.uniform = true;
  return s;
}

CollaborationClass classify_collaboration(const PublicationRecord& pub) {
  if (pub.byline.empty()) {
    fail(ErrorKind::Domain, "publication '" + pub.pub_id + "' has no byline");
  }
  const std::size_t n = pub.byline.size();
  const AuthorSlot* first = nullptr;
  const AuthorSlot* last = nullptr;
  for (const auto& slot : pub.byline) {
    if (slot.position == 1) first = &slot;
    if (slot.position == static_cast<int>(n)) last = &slot;
  }
  if (!first || !last) {
    fail(ErrorKind::Domain,
         "publication '" + pub.pub_id + "' byline positions are not 1..n");
  }
  if (!first->university_id || !last->university_id) {
    return CollaborationClass::Extramural;
  }
  return *first->university_id == *last->university_id
             ? CollaborationClass::Intramural
             : CollaborationClass::Extramural;
}

std::vector<double> position_weights(std::size_t n, CollaborationClass cls,
                                     const CreditScheme& scheme) {
  scheme.validate();
  if (n == 0) {
    fail(ErrorKind::Domain, "byline length must be at least 1");
  }
  if (scheme.uniform) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
  }

  enum class Role { End, Adjacent, Middle };
  std::vector<Role> roles(n, Role::Middle);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pos = i + 1;
    if (pos == 1 || pos == n) {
      roles[i] = Role::End;
    } else if (cls == CollaborationClass::Extramural &&
               (pos == 2 || pos == n - 1)) {
      roles[i] = Role::Adjacent;
    }
  }

  const double end_w = cls == CollaborationClass::Intramural
                           ? scheme.intramural_end
                           : scheme.extramural_end;
  std::vector<double> weights(n, 0.0);
  double assigned = 0.0;
  std::size_t middles = 0;
  for (std::size_t i = 0; i < n; ++i) {
    switch (roles[i]) {
      case Role::End:
        weights[i] = end_w;
        assigned += end_w;
        break;
      case Role::Adjacent:
        weights[i] = scheme.extramural_adjacent;
        assigned += scheme.extramural_adjacent;
        break;
      case Role::Middle:
        ++middles;
        break;
    }
  }
  if (middles > 0) {
    const double share = (1.0 - assigned) / static_cast<double>(middles);
    for (std::size_t i = 0; i < n; ++i) {
      if (roles[i] == Role::Middle) weights[i] = share;
    }
  } else {
    // No interior to absorb the residual; renormalize what was assigned.
    for (auto& w : weights) w /= assigned;
  }
  return weights;
}

namespace {

double accumulate_matching(const PublicationRecord& pub,
                           const std::string& university_id,
                           const std::string& sds_code,
                           const StaffLookup& lookup,
                           const std::vector<double>* weights, int* count) {
  const std::size_t n = pub.byline.size();
  double total = 0.0;
  for (const auto& slot : pub.byline) {
    if (!slot.researcher_id) continue;
    const StaffMember* m = lookup.find(*slot.researcher_id);
    if (!m || m->university_id != university_id || m->sds_code != sds_code) {
      continue;
    }
    if (weights) {
      if (slot.position < 1 || slot.position > static_cast<int>(n)) {
        fail(ErrorKind::Domain, "publication '" + pub.pub_id +
                                    "' byline position out of range");
      }
      total += (*weights)[static_cast<std::size_t>(slot.position) - 1];
    }
    if (count) ++*count;
  }
  return total;
}

}  // namespace

double weighted_fraction(const PublicationRecord& pub,
                         const std::string& university_id,
                         const std::string& sds_code, const StaffLookup& lookup,
                         const CreditScheme& scheme) {
  const auto weights =
      position_weights(pub.byline.size(), classify_collaboration(pub), scheme);
  return accumulate_matching(pub, university_id, sds_code, lookup, &weights,
                             nullptr);
}

double plain_fraction(const PublicationRecord& pub,
                      const std::string& university_id,
                      const std::string& sds_code, const StaffLookup& lookup) {
  int count = 0;
  accumulate_matching(pub, university_id, sds_code, lookup, nullptr, &count);
  return static_cast<double>(count) / static_cast<double>(pub.byline.size());
}

int full_author_count(const PublicationRecord& pub,
                      const std::string& university_id,
                      const std::string& sds_code, const StaffLookup& lookup) {
  int count = 0;
  accumulate_matching(pub, university_id, sds_code, lookup, nullptr, &count);
  return count;
}

bool full_share(const PublicationRecord& pub, const std::string& university_id,
                const std::string& sds_code, const StaffLookup& lookup) {
  return full_author_count(pub, university_id, sds_code, lookup) > 0;
}

}  // namespace prodrank
