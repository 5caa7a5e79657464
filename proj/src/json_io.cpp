#include "gmmds/json_io.hpp"

#include <algorithm>

namespace gmmds {

namespace {

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw InputError(path.empty() ? "expected a JSON object" : "field '" + path + "': expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError("missing field '" + (path.empty() ? std::string(key) : path + "." + key) + "'");
  return *it;
}

long long as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw InputError("field '" + path + "': expected an integer");
  return j.get<long long>();
}

std::uint64_t as_u64(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw InputError("field '" + path + "': expected a non-negative integer");
  return j.get<std::uint64_t>();
}

int as_small_int(const json& j, const std::string& path, long long lo, long long hi) {
  const long long v = as_int(j, path);
  if (v < lo || v > hi)
    throw InputError("field '" + path + "': " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw InputError("field '" + path + "': expected an array");
  return j;
}

constexpr long long kMaxCol = 1 << 20;

std::vector<int> one_based(const std::vector<int>& v) {
  std::vector<int> out;
  out.reserve(v.size());
  for (int x : v) out.push_back(x + 1);
  return out;
}

json families(const std::vector<Family>& v) {
  json a = json::array();
  for (const auto& f : v) a.push_back(family_to_json(f));
  return a;
}

json params(const Params& p) { return json::array({p.m, p.n, p.k}); }

}  // namespace

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

Family family_from_json(const json& j) {
  Family fam;
  fam.k = as_small_int(require(j, "k", ""), "k", 0, 1 << 16);
  const bool has_sets = j.contains("sets"), has_msets = j.contains("msets");
  if (has_sets == has_msets) throw InputError("expected exactly one of 'sets' or 'msets'");
  int max_col = 0;
  if (has_sets) {
    const auto& sets = as_array(j["sets"], "sets");
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const std::string path = "sets[" + std::to_string(i) + "]";
      std::vector<int> s;
      const auto& row = as_array(sets[i], path);
      for (std::size_t t = 0; t < row.size(); ++t) {
        const int c = as_small_int(row[t], path + "[" + std::to_string(t) + "]", 1, kMaxCol);
        s.push_back(c - 1);
        max_col = std::max(max_col, c);
      }
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw InputError("field '" + path + "': repeated column (use 'msets' for multisets)");
      fam.sets.push_back(std::move(s));
    }
  } else {
    const auto& msets = as_array(j["msets"], "msets");
    for (std::size_t i = 0; i < msets.size(); ++i) {
      const std::string path = "msets[" + std::to_string(i) + "]";
      if (!msets[i].is_object()) throw InputError("field '" + path + "': expected an object {\"col\": count}");
      std::vector<int> s;
      for (const auto& [key, value] : msets[i].items()) {
        const std::string kpath = path + "." + key;
        int c = 0;
        try {
          std::size_t used = 0;
          c = std::stoi(key, &used);
          if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
          throw InputError("field '" + kpath + "': column keys must be integers");
        }
        if (c < 1 || c > kMaxCol) throw InputError("field '" + kpath + "': column out of range");
        const int count = as_small_int(value, kpath, 0, 1 << 16);
        s.insert(s.end(), static_cast<std::size_t>(count), c - 1);
        if (count > 0) max_col = std::max(max_col, c);
      }
      std::sort(s.begin(), s.end());
      fam.sets.push_back(std::move(s));
    }
  }
  fam.n = j.contains("n") ? as_small_int(j["n"], "n", 0, kMaxCol) : max_col;
  if (j.contains("multiplicities")) {
    const auto& mult = as_array(j["multiplicities"], "multiplicities");
    for (std::size_t i = 0; i < mult.size(); ++i)
      fam.mult.push_back(as_small_int(mult[i], "multiplicities[" + std::to_string(i) + "]", -(1 << 16), 1 << 16));
  } else {
    for (const auto& s : fam.sets) fam.mult.push_back(fam.k - static_cast<int>(s.size()));
  }
  try {
    validate(fam);
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  return fam;
}

json family_to_json(const Family& fam) {
  json j;
  j["k"] = fam.k;
  j["n"] = fam.n;
  if (fam.is_multiset()) {
    json msets = json::array();
    for (const auto& s : fam.sets) {
      json o = json::object();
      for (std::size_t t = 0; t < s.size();) {
        std::size_t u = t;
        while (u < s.size() && s[u] == s[t]) ++u;
        o[std::to_string(s[t] + 1)] = u - t;
        t = u;
      }
      msets.push_back(std::move(o));
    }
    j["msets"] = std::move(msets);
  } else {
    json sets = json::array();
    for (const auto& s : fam.sets) sets.push_back(one_based(s));
    j["sets"] = std::move(sets);
  }
  j["multiplicities"] = fam.mult;
  return j;
}

RowsetInput rowsets_from_json(const json& j) {
  RowsetInput in;
  const auto& rows = as_array(require(j, "rowsets", ""), "rowsets");
  int max_col = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string path = "rowsets[" + std::to_string(i) + "]";
    std::vector<int> s;
    const auto& row = as_array(rows[i], path);
    for (std::size_t t = 0; t < row.size(); ++t) {
      const int c = as_small_int(row[t], path + "[" + std::to_string(t) + "]", 1, kMaxCol);
      s.push_back(c - 1);
      max_col = std::max(max_col, c);
    }
    std::sort(s.begin(), s.end());
    in.rowsets.push_back(std::move(s));
  }
  in.k = j.contains("k") ? as_small_int(j["k"], "k", 1, 1 << 16) : static_cast<int>(rows.size());
  in.n = j.contains("n") ? as_small_int(j["n"], "n", 1, kMaxCol) : std::max(max_col, in.k);
  return in;
}

json to_json(const ConditionVerdict& v) {
  json j;
  j["holds"] = v.holds;
  j["witness"] = one_based(v.witness);
  j["lhs"] = v.lhs;
  j["rhs"] = v.rhs;
  return j;
}

json to_json(const ReductionStep& s) {
  json j;
  j["kind"] = to_string(s.kind);
  j["groups"] = one_based(s.groups);
  j["columns"] = one_based(s.columns);
  j["before"] = params(s.before);
  json after = json::array();
  for (const auto& p : s.after) after.push_back(params(p));
  j["after"] = std::move(after);
  return j;
}

json to_json(const AuditReport& a) {
  static constexpr const char* names[] = {"i", "ii", "iii", "iv", "v", "vi", "vii", "viii"};
  json j;
  json conds = json::array();
  for (std::size_t c = 0; c < a.conditions.size(); ++c) {
    json o;
    o["condition"] = names[c];
    o["holds"] = a.conditions[c].holds;
    o["groups"] = one_based(a.conditions[c].groups);
    o["columns"] = one_based(a.conditions[c].columns);
    conds.push_back(std::move(o));
  }
  j["conditions"] = std::move(conds);
  json props = json::array();
  for (const auto& p : a.proposals) props.push_back(to_json(p));
  j["proposals"] = std::move(props);
  return j;
}

json to_json(const ReductionTrace& t) {
  json j;
  json steps = json::array();
  for (const auto& s : t.steps) steps.push_back(to_json(s));
  j["steps"] = std::move(steps);
  j["leaves"] = families(t.leaves);
  return j;
}

json to_json(const ReducedVerdict& v) {
  json j = to_json(v.trace);
  json leaves = json::array();
  for (const auto& l : v.leaf_verdicts) leaves.push_back(to_json(l));
  j["leaf_verdicts"] = std::move(leaves);
  j["status"] = to_string(v.status);
  return j;
}

json matrix_to_json(const Matrix& m) { return m.to_rows(); }

Matrix matrix_from_json(const json& j, const std::string& field) {
  const auto& rows = as_array(j, field);
  std::vector<std::vector<Elem>> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string path = field + "[" + std::to_string(r) + "]";
    std::vector<Elem> row;
    for (std::size_t c = 0; c < as_array(rows[r], path).size(); ++c)
      row.push_back(as_u64(rows[r][c], path + "[" + std::to_string(c) + "]"));
    if (!out.empty() && row.size() != out.front().size()) throw InputError("field '" + path + "': ragged matrix");
    out.push_back(std::move(row));
  }
  return Matrix::from_rows(out);
}

json to_json(const TInstance& t, std::uint64_t p) {
  json j;
  j["p"] = p;
  j["family"] = family_to_json(t.family);
  j["alpha"] = t.alpha;
  json blocks = json::array();
  for (const auto& [b, e] : t.block_rows) blocks.push_back(json::array({b, e}));
  j["block_rows"] = std::move(blocks);
  j["T"] = matrix_to_json(t.matrix);
  return j;
}

json to_json(const IdentityVerdict& v) {
  json j;
  j["status"] = to_string(v.status);
  j["p"] = v.p;
  j["witness_alpha"] = v.witness_alpha;
  j["trials_used"] = v.trials_used;
  j["failure_bound"] = v.failure_bound;
  j["resolved_by"] = v.resolved_by;
  return j;
}

IdentityVerdict identity_verdict_from_json(const json& j) {
  IdentityVerdict v;
  const auto& s = require(j, "status", "");
  if (!s.is_string()) throw InputError("field 'status': expected a string");
  const auto name = s.get<std::string>();
  if (name == "nonzero") v.status = IdentityStatus::nonzero;
  else if (name == "likely_zero") v.status = IdentityStatus::likely_zero;
  else if (name == "proven_zero") v.status = IdentityStatus::proven_zero;
  else throw InputError("field 'status': unknown value '" + name + "'");
  v.p = as_u64(require(j, "p", ""), "p");
  const auto& w = as_array(require(j, "witness_alpha", ""), "witness_alpha");
  for (std::size_t i = 0; i < w.size(); ++i) v.witness_alpha.push_back(as_u64(w[i], "witness_alpha[" + std::to_string(i) + "]"));
  v.trials_used = as_small_int(require(j, "trials_used", ""), "trials_used", 0, 1 << 30);
  const auto& fb = require(j, "failure_bound", "");
  if (!fb.is_number()) throw InputError("field 'failure_bound': expected a number");
  v.failure_bound = fb.get<double>();
  v.resolved_by = require(j, "resolved_by", "").get<std::string>();
  return v;
}

ConditionVerdict condition_verdict_from_json(const json& j) {
  ConditionVerdict v;
  const auto& h = require(j, "holds", "");
  if (!h.is_boolean()) throw InputError("field 'holds': expected a boolean");
  v.holds = h.get<bool>();
  const auto& w = as_array(require(j, "witness", ""), "witness");
  for (std::size_t i = 0; i < w.size(); ++i) v.witness.push_back(as_small_int(w[i], "witness[" + std::to_string(i) + "]", 1, 1 << 20) - 1);
  v.lhs = as_small_int(require(j, "lhs", ""), "lhs", -(1 << 30), 1 << 30);
  v.rhs = as_small_int(require(j, "rhs", ""), "rhs", -(1 << 30), 1 << 30);
  return v;
}

json to_json(const ExactResult& r) {
  json j;
  j["status"] = to_string(r.status);
  j["determinant"] = r.det.to_string();
  j["total_degree"] = r.det.total_degree();
  return j;
}

json to_json(const Certificate& c) {
  json j;
  j["p"] = c.p;
  j["alpha"] = c.alpha;
  json q = json::array();
  for (const auto& poly : c.qpolys) q.push_back(poly.coeffs);
  j["q"] = std::move(q);
  return j;
}

json to_json(const CellReport& c) {
  json j;
  j["m"] = c.m;
  j["k"] = c.k;
  j["mode"] = !c.sampled ? "exhaustive" : c.exhausted ? "sampled-exhausted" : "sampled";
  if (c.sampled) j["samples_requested"] = c.samples_requested;
  j["enumerated"] = c.enumerated;
  j["satisfying"] = c.satisfying;
  j["nonzero"] = c.nonzero;
  j["escalated"] = c.escalated;
  j["exact_resolved"] = c.exact_resolved;
  j["counterexamples"] = families(c.counterexamples);
  j["inconclusive"] = families(c.inconclusive);
  if (c.violating_tested > 0) {
    j["violating_tested"] = c.violating_tested;
    j["violating_proven_zero"] = c.violating_proven_zero;
    j["violating_likely_zero"] = c.violating_likely_zero;
    j["violating_nonzero"] = families(c.violating_nonzero);
  }
  return j;
}

json to_json(const VerificationReport& r) {
  json j;
  const auto& o = r.options;
  j["seed"] = o.seed;
  j["m_max"] = o.m_max;
  j["k_max"] = o.k_max;
  j["trials"] = o.trials;
  j["exact_limit"] = o.exact_limit;
  j["field_size_hint"] = o.field_size_hint;
  json cells = json::array();
  for (const auto& c : r.cells) cells.push_back(to_json(c));
  j["cells"] = std::move(cells);
  j["satisfying_total"] = r.satisfying_count();
  j["counterexample_total"] = r.counterexample_count();
  j["inconclusive_total"] = r.inconclusive_count();
  j["verified"] = r.verified();
  return j;
}

json to_json(const NecessityReport& r) {
  json j;
  j["seed"] = r.options.seed;
  j["samples"] = r.options.samples;
  j["k_max"] = r.options.k_max;
  j["exact_limit"] = r.options.exact_limit;
  j["evaluations"] = r.options.evaluations;
  j["generated"] = r.generated;
  j["multisets"] = r.multisets;
  j["exact_checked"] = r.exact_checked;
  j["proven_zero"] = r.proven_zero;
  j["all_vanished"] = r.all_vanished;
  j["certificates_valid"] = r.certificates_valid;
  j["exceptions"] = families(r.exceptions);
  j["passed"] = r.passed();
  return j;
}

json to_json(const CrossCheckReport& r) {
  json j;
  j["seed"] = r.options.seed;
  j["samples"] = r.options.samples;
  j["k_max"] = r.options.k_max;
  j["strip"] = {{"instances", r.strip_instances},
                {"noop", r.strip_noop},
                {"condition_agree", r.strip_condition_agree},
                {"reduced_nonzero", r.strip_reduced_nonzero},
                {"lifted", r.strip_lifted}};
  j["merge_disjoint"] = {{"accepted", r.disjoint_accepted},
                         {"reduced_nonzero", r.disjoint_reduced_nonzero},
                         {"lifted", r.disjoint_lifted}};
  j["merge_multiset"] = {{"accepted", r.multiset_accepted},
                         {"reduced_nonzero", r.multiset_reduced_nonzero},
                         {"lifted", r.multiset_lifted}};
  j["split_tight"] = {{"accepted", r.split_accepted},
                      {"bookkeeping_ok", r.split_bookkeeping_ok},
                      {"both_nonzero", r.split_both_nonzero},
                      {"lifted", r.split_lifted}};
  j["passed"] = r.passed();
  return j;
}

json to_json(const CodeArtifact& a) {
  json j;
  j["p"] = a.p;
  j["k"] = a.k;
  j["n"] = a.n;
  j["alpha"] = a.alpha;
  j["T"] = matrix_to_json(a.T);
  j["G"] = matrix_to_json(a.G);
  json rows = json::array();
  for (const auto& s : a.rowsets) rows.push_back(one_based(s));
  j["rowsets"] = std::move(rows);
  j["padded_columns"] = a.padded_columns;
  j["attempts"] = a.attempts;
  j["singular_draws"] = a.singular_draws;
  j["field_escalations"] = a.field_escalations;
  return j;
}

CodeArtifact artifact_from_json(const json& j) {
  CodeArtifact a;
  a.p = as_u64(require(j, "p", ""), "p");
  if (!is_prime(a.p)) throw InputError("field 'p': " + std::to_string(a.p) + " is not prime");
  const auto& alpha = as_array(require(j, "alpha", ""), "alpha");
  for (std::size_t i = 0; i < alpha.size(); ++i) a.alpha.push_back(as_u64(alpha[i], "alpha[" + std::to_string(i) + "]"));
  a.T = matrix_from_json(require(j, "T", ""), "T");
  a.G = matrix_from_json(require(j, "G", ""), "G");
  a.k = j.contains("k") ? as_small_int(j["k"], "k", 0, 1 << 16) : static_cast<int>(a.G.rows());
  a.n = j.contains("n") ? as_small_int(j["n"], "n", 0, kMaxCol) : static_cast<int>(a.G.cols());
  const auto rows = rowsets_from_json(json{{"rowsets", require(j, "rowsets", "")}, {"k", a.k}, {"n", std::max(a.n, 1)}});
  a.rowsets = rows.rowsets;
  if (j.contains("padded_columns")) a.padded_columns = as_small_int(j["padded_columns"], "padded_columns", 0, kMaxCol);
  if (j.contains("attempts")) a.attempts = as_small_int(j["attempts"], "attempts", 0, 1 << 30);
  if (j.contains("singular_draws")) a.singular_draws = as_small_int(j["singular_draws"], "singular_draws", 0, 1 << 30);
  if (j.contains("field_escalations")) a.field_escalations = as_small_int(j["field_escalations"], "field_escalations", 0, 1 << 30);
  return a;
}

}  // namespace gmmds
