#include "gmmds/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "gmmds/construct.hpp"
#include "gmmds/json_io.hpp"
#include "gmmds/random.hpp"
#include "gmmds/reduce.hpp"
#include "gmmds/tmatrix.hpp"
#include "gmmds/verify.hpp"

namespace gmmds::cli {

namespace {

struct Config {
  std::string family;
  std::string file;
  std::string rowsets;
  std::string alpha;
  std::uint64_t field_size = 0;
  int trials = 8;
  std::uint64_t seed = 0;
  int exact_limit = 8;
  int m_max = 4;
  int k_max = 6;
  int nec_k_max = 8;
  int nec_exact_limit = 6;
  int jobs = 1;
  std::string format = "json";
  int verbose = 0;
  std::vector<std::string> sample_cells;
  bool include_violating = false;
  bool decide = false;
  std::size_t samples = 0;
  int max_attempts = 64;
  int enum_m = 2;
  int enum_k = 2;
  bool all_families = false;
  bool count_only = false;
};

std::string read_input(const Config& cfg, const std::string& inline_text, const char* what) {
  if (!inline_text.empty() && !cfg.file.empty()) throw InputError(std::string("give either --") + what + " or --file, not both");
  if (!inline_text.empty()) return inline_text;
  if (cfg.file.empty()) throw InputError(std::string("no input: pass --") + what + " '<json>' or --file PATH ('-' for stdin)");
  std::ostringstream buf;
  if (cfg.file == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(cfg.file);
    if (!in) throw InputError("cannot open " + cfg.file);
    buf << in.rdbuf();
  }
  return buf.str();
}

Family load_family(const Config& cfg) { return family_from_json(parse_json(read_input(cfg, cfg.family, "family"))); }

/// Normalized version of the input, or the input itself when already in T form.
Family tform_of(const Family& fam) { return is_normalized(fam) ? fam : normalize(fam); }

std::vector<Elem> parse_alpha(const std::string& text) {
  std::vector<Elem> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("--alpha: '" + item + "' is not a non-negative integer");
    }
  }
  return out;
}

std::vector<Elem> alpha_for(const Config& cfg, const PrimeField& f, int n) {
  if (!cfg.alpha.empty()) {
    auto a = parse_alpha(cfg.alpha);
    if (static_cast<int>(a.size()) != n)
      throw InputError("--alpha has " + std::to_string(a.size()) + " values, the family has n = " + std::to_string(n));
    for (auto& x : a) x = f.reduce(x);
    return a;
  }
  Rng rng(cfg.seed);
  auto raw = sample_distinct(rng, f.modulus(), static_cast<std::size_t>(n));
  return {raw.begin(), raw.end()};
}

IdentityOptions identity_options(const Config& cfg) {
  IdentityOptions o;
  o.field_size_hint = cfg.field_size;
  o.trials = cfg.trials;
  o.seed = cfg.seed;
  o.exact_limit = cfg.exact_limit;
  return o;
}

// ---------------------------------------------------------------- output

void table_value(std::ostream& os, const json& v) {
  if (v.is_string()) os << v.get<std::string>();
  else os << v.dump();
}

void render_table(std::ostream& os, const json& j, const std::string& prefix = "") {
  for (const auto& [key, v] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (v.is_object()) {
      render_table(os, v, name);
    } else if (v.is_array() && !v.empty() && v.front().is_object() && v.front().contains("m") && v.front().contains("k")) {
      // cell list
      os << name << ":\n";
      os << "  " << std::left << std::setw(4) << "m" << std::setw(4) << "k" << std::setw(20) << "mode" << std::setw(12)
         << "enumerated" << std::setw(12) << "satisfying" << std::setw(10) << "nonzero" << std::setw(10) << "escalated"
         << std::setw(8) << "exact" << std::setw(8) << "ce" << "inc\n";
      for (const auto& c : v)
        os << "  " << std::setw(4) << c["m"].dump() << std::setw(4) << c["k"].dump() << std::setw(20)
           << c["mode"].get<std::string>() << std::setw(12) << c["enumerated"].dump() << std::setw(12)
           << c["satisfying"].dump() << std::setw(10) << c["nonzero"].dump() << std::setw(10) << c["escalated"].dump()
           << std::setw(8) << c["exact_resolved"].dump() << std::setw(8) << c["counterexamples"].size()
           << c["inconclusive"].size() << "\n";
    } else if (v.is_array() && !v.empty() && v.front().is_array()) {
      os << name << ":\n";
      for (const auto& row : v) os << "  " << row.dump() << "\n";
    } else {
      os << name << ": ";
      table_value(os, v);
      os << "\n";
    }
  }
}

void emit(std::ostream& out, const Config& cfg, const std::string& command, json result) {
  json doc;
  doc["command"] = command;
  doc["seed"] = cfg.seed;
  doc["result"] = std::move(result);
  if (cfg.format == "table") render_table(out, doc);
  else out << doc.dump(2) << "\n";
}

int infeasible(std::ostream& out, const Config& cfg, const std::string& command, const InfeasibleError& e) {
  json r;
  r["infeasible"] = true;
  r["condition"] = to_json(e.verdict());
  emit(out, cfg, command, std::move(r));
  return negative;
}

int status_code(IdentityStatus s) {
  switch (s) {
    case IdentityStatus::nonzero: return affirmative;
    case IdentityStatus::proven_zero: return negative;
    case IdentityStatus::likely_zero: return inconclusive;
  }
  return inconclusive;
}

// ---------------------------------------------------------------- commands

int cmd_check(const Config& cfg, std::ostream& out) {
  const auto v = check_condition(load_family(cfg));
  emit(out, cfg, "check", to_json(v));
  return v.holds ? affirmative : negative;
}

int cmd_normalize(const Config& cfg, std::ostream& out) {
  emit(out, cfg, "normalize", family_to_json(normalize(load_family(cfg))));
  return affirmative;
}

int cmd_audit(const Config& cfg, std::ostream& out) {
  const Family fam = tform_of(load_family(cfg));
  json r;
  r["family"] = family_to_json(fam);
  r["audit"] = to_json(audit(fam));
  emit(out, cfg, "audit", std::move(r));
  return affirmative;
}

int cmd_reduce(const Config& cfg, std::ostream& out) {
  const Family fam = tform_of(load_family(cfg));
  if (!cfg.decide) {
    emit(out, cfg, "reduce", to_json(reduce_to_irreducible(fam)));
    return affirmative;
  }
  const auto v = reduce_and_decide(fam, identity_options(cfg));
  emit(out, cfg, "reduce", to_json(v));
  switch (v.status) {
    case ReducedStatus::nonzero: return affirmative;
    case ReducedStatus::counterexample_leaf: return negative;
    case ReducedStatus::inconclusive: return inconclusive;
  }
  return inconclusive;
}

// Single evaluations carry no soundness claim, so a prime --field-size is
// taken as is.
PrimeField evaluation_field(const Config& cfg, const Family& fam) {
  if (cfg.field_size >= 2 && is_prime(cfg.field_size)) return PrimeField(cfg.field_size);
  return PrimeField(default_prime(fam, cfg.field_size));
}

int cmd_build_t(const Config& cfg, std::ostream& out) {
  const Family fam = tform_of(load_family(cfg));
  const PrimeField f = evaluation_field(cfg, fam);
  const TInstance t = build_t(f, fam, alpha_for(cfg, f, fam.n));
  json r = to_json(t, f.modulus());
  const Elem d = det(f, t.matrix);
  r["det"] = d;
  emit(out, cfg, "build-t", std::move(r));
  return d != 0 ? affirmative : negative;
}

int cmd_id_test(const Config& cfg, std::ostream& out) {
  const Family fam = tform_of(load_family(cfg));
  const auto v = decide_identity(fam, identity_options(cfg));
  json r = to_json(v);
  r["degree_bound"] = degree_bound(fam);
  emit(out, cfg, "id-test", std::move(r));
  return status_code(v.status);
}

int cmd_certificate(const Config& cfg, std::ostream& out) {
  const Family fam = tform_of(load_family(cfg));
  const PrimeField f = evaluation_field(cfg, fam);
  const TInstance t = build_t(f, fam, alpha_for(cfg, f, fam.n));
  const auto cert = extract_certificate(f, t);
  json r;
  r["p"] = f.modulus();
  r["alpha"] = t.alpha;
  r["singular"] = cert.has_value();
  if (cert) {
    r["certificate"] = to_json(*cert);
    r["valid"] = certificate_valid(f, t, *cert);
  }
  emit(out, cfg, "certificate", std::move(r));
  return cert && certificate_valid(f, t, *cert) ? affirmative : negative;
}

SampledCell parse_cell(const std::string& text) {
  SampledCell c;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  long long m = 0, k = 0, s = 0;
  if (!(in >> m >> c1 >> k >> c2 >> s) || c1 != ',' || c2 != ',' || !in.eof() || m < 2 || k < m || s < 1)
    throw InputError("--sample expects M,K,COUNT with 2 <= M <= K and COUNT >= 1, got '" + text + "'");
  c.m = static_cast<int>(m);
  c.k = static_cast<int>(k);
  c.samples = static_cast<std::size_t>(s);
  return c;
}

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream& err) {
  GridOptions o;
  o.m_max = cfg.m_max;
  o.k_max = cfg.k_max;
  o.trials = cfg.trials;
  o.seed = cfg.seed;
  o.exact_limit = cfg.exact_limit;
  o.field_size_hint = cfg.field_size;
  o.jobs = cfg.jobs;
  o.include_violating = cfg.include_violating;
  for (const auto& s : cfg.sample_cells) o.sampled.push_back(parse_cell(s));
  const auto rep = verify_grid(o);
  if (cfg.verbose > 0) {
    for (const auto& c : rep.cells)
      err << "cell m=" << c.m << " k=" << c.k << " satisfying=" << c.satisfying << " nonzero=" << c.nonzero << "\n";
    err << "wall time " << std::fixed << std::setprecision(2) << rep.wall_seconds << " s\n";
  }
  emit(out, cfg, "verify", to_json(rep));
  if (rep.counterexample_count() > 0) return negative;
  return rep.inconclusive_count() > 0 ? inconclusive : affirmative;
}

int cmd_necessity(const Config& cfg, std::ostream& out) {
  NecessityOptions o;
  o.seed = cfg.seed;
  if (cfg.samples > 0) o.samples = cfg.samples;
  o.k_max = cfg.nec_k_max;
  o.exact_limit = cfg.nec_exact_limit;
  const auto rep = necessity_fuzz(o);
  emit(out, cfg, "necessity", to_json(rep));
  return rep.passed() ? affirmative : negative;
}

int cmd_cross_check(const Config& cfg, std::ostream& out) {
  CrossCheckOptions o;
  o.seed = cfg.seed;
  if (cfg.samples > 0) o.samples = cfg.samples;
  o.k_max = cfg.k_max;
  const auto rep = reduction_cross_check(o);
  emit(out, cfg, "cross-check", to_json(rep));
  return rep.passed() ? affirmative : negative;
}

int cmd_enumerate(const Config& cfg, std::ostream& out) {
  json list = json::array();
  std::size_t satisfying = 0;
  const auto count = enumerate_families(cfg.enum_m, cfg.enum_k, !cfg.all_families, [&](const CanonicalFamily& f) {
    const bool ok = condition_holds(f);
    satisfying += ok;
    if (cfg.count_only) return;
    json e = family_to_json(f.to_family());
    e["condition"] = ok;
    list.push_back(std::move(e));
  });
  json r;
  r["m"] = cfg.enum_m;
  r["k"] = cfg.enum_k;
  r["count"] = count;
  r["satisfying"] = satisfying;
  if (!cfg.count_only) r["families"] = std::move(list);
  emit(out, cfg, "enumerate", std::move(r));
  return affirmative;
}

int cmd_construct(const Config& cfg, std::ostream& out) {
  const auto in = rowsets_from_json(parse_json(read_input(cfg, cfg.rowsets, "rowsets")));
  ConstructOptions o;
  o.field_size_hint = cfg.field_size;
  o.seed = cfg.seed;
  o.max_attempts = cfg.max_attempts;
  CodeArtifact art;
  try {
    art = construct_code(in.rowsets, in.n, in.k, o);
  } catch (const InfeasibleError& e) {
    json r;
    r["infeasible"] = true;
    r["condition"] = to_json(e.verdict());
    r["distance_bound"] = nullptr;
    emit(out, cfg, "construct", std::move(r));
    return negative;
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    // rejection sampling ran out of attempts at every field size tried
    json r;
    r["infeasible"] = false;
    r["error"] = e.what();
    emit(out, cfg, "construct", std::move(r));
    return inconclusive;
  }
  json r = to_json(art);
  r["distance_bound"] = art.n - art.k + 1;
  emit(out, cfg, "construct", std::move(r));
  return affirmative;
}

int cmd_mds_check(const Config& cfg, std::ostream& out) {
  const json j = parse_json(read_input(cfg, cfg.family, "artifact"));
  // Accept a full construct output, its result, or a bare {p, G}.
  const json& body = j.contains("result") ? j["result"] : j;
  if (!body.contains("p") || !body.contains("G")) throw InputError("mds-check expects an object with fields 'p' and 'G'");
  const std::uint64_t p = body["p"].is_number_unsigned() ? body["p"].get<std::uint64_t>() : 0;
  if (!is_prime(p)) throw InputError("field 'p': expected a prime");
  const PrimeField f(p);
  const Matrix G = matrix_from_json(body["G"], "G");
  const auto failing = mds_check(f, G);
  json r;
  r["p"] = p;
  r["k"] = G.rows();
  r["n"] = G.cols();
  r["mds"] = !failing.has_value();
  if (failing) {
    json cols = json::array();
    for (int c : *failing) cols.push_back(c + 1);
    r["failing_columns"] = std::move(cols);
  }
  if (body.contains("rowsets")) {
    const auto rs = rowsets_from_json(json{{"rowsets", body["rowsets"]}, {"k", static_cast<int>(G.rows())}, {"n", static_cast<int>(G.cols())}});
    r["zero_pattern_exact"] = zero_pattern_exact(G, rs.rowsets);
  }
  emit(out, cfg, "mds-check", std::move(r));
  return failing ? negative : affirmative;
}

template <typename T>
void env_default(const char* name, T& target) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return;
  try {
    std::size_t used = 0;
    const auto parsed = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(v);
    target = static_cast<T>(parsed);
  } catch (const std::exception&) {
    throw InputError(std::string("environment variable ") + name + " must be a non-negative integer");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  try {
    env_default("GMMDS_FIELD_SIZE", cfg.field_size);
    env_default("GMMDS_JOBS", cfg.jobs);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  }

  CLI::App app{"Support-constrained Reed-Solomon codes over prime fields"};
  app.name(args.empty() ? "gmmds" : args.front());
  app.require_subcommand(1);
  app.set_version_flag("--version", "gmmds 0.1.0");

  auto add_family = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "family as inline JSON");
    sub->add_option("--file", cfg.file, "read JSON from a file, '-' for stdin");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--field-size", cfg.field_size, "lower bound on the prime p (env GMMDS_FIELD_SIZE)");
    sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
    sub->add_flag("-v,--verbose", cfg.verbose, "progress lines on stderr");
  };
  auto add_identity = [&](CLI::App* sub) {
    sub->add_option("--trials", cfg.trials, "random evaluations per field")->check(CLI::Range(1, 1000))->capture_default_str();
    sub->add_option("--exact-limit", cfg.exact_limit, "largest k for exact expansion")->check(CLI::Range(0, 12))->capture_default_str();
  };

  std::map<std::string, std::function<int()>> handlers;
  auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

  auto* check = sub("check", "evaluate the support condition");
  add_family(check);
  add_common(check);
  handlers["check"] = [&] { return cmd_check(cfg, out); };

  auto* norm = sub("normalize", "pad every set to size k - r_i");
  add_family(norm);
  add_common(norm);
  handlers["normalize"] = [&] { return cmd_normalize(cfg, out); };

  auto* aud = sub("audit", "report minimality conditions (i)-(viii)");
  add_family(aud);
  add_common(aud);
  handlers["audit"] = [&] { return cmd_audit(cfg, out); };

  auto* red = sub("reduce", "apply reductions until irreducible");
  add_family(red);
  add_common(red);
  add_identity(red);
  red->add_flag("--decide", cfg.decide, "also decide det T on every leaf");
  handlers["reduce"] = [&] { return cmd_reduce(cfg, out); };

  auto* bt = sub("build-t", "build T at a given or random alpha");
  add_family(bt);
  add_common(bt);
  bt->add_option("--alpha", cfg.alpha, "comma-separated alpha_1..alpha_n");
  handlers["build-t"] = [&] { return cmd_build_t(cfg, out); };

  auto* idt = sub("id-test", "decide whether det T is identically zero");
  add_family(idt);
  add_common(idt);
  add_identity(idt);
  handlers["id-test"] = [&] { return cmd_id_test(cfg, out); };

  auto* cert = sub("certificate", "left-nullspace certificate of a singular T");
  add_family(cert);
  add_common(cert);
  cert->add_option("--alpha", cfg.alpha, "comma-separated alpha_1..alpha_n");
  handlers["certificate"] = [&] { return cmd_certificate(cfg, out); };

  auto* ver = sub("verify", "decide det T on every small canonical family");
  add_common(ver);
  add_identity(ver);
  ver->add_option("--m-max", cfg.m_max, "largest m in the exhaustive grid")->check(CLI::Range(1, 8))->capture_default_str();
  ver->add_option("--k-max", cfg.k_max, "largest k in the exhaustive grid")->check(CLI::Range(2, 16))->capture_default_str();
  ver->add_option("--sample", cfg.sample_cells, "sampled cell M,K,COUNT (repeatable)");
  ver->add_option("--jobs", cfg.jobs, "worker threads (env GMMDS_JOBS)")->check(CLI::Range(1, 256));
  ver->add_flag("--include-violating", cfg.include_violating, "also test families that violate the condition");
  handlers["verify"] = [&] { return cmd_verify(cfg, out, err); };

  auto* nec = sub("necessity", "fuzz condition-violating families");
  add_common(nec);
  nec->add_option("--samples", cfg.samples, "number of families (default 1000)");
  nec->add_option("--k-max", cfg.nec_k_max, "largest k")->check(CLI::Range(2, 16))->capture_default_str();
  nec->add_option("--exact-limit", cfg.nec_exact_limit, "largest k for exact expansion")->check(CLI::Range(0, 12))->capture_default_str();
  handlers["necessity"] = [&] { return cmd_necessity(cfg, out); };

  auto* cc = sub("cross-check", "check the reductions on random instances");
  add_common(cc);
  cc->add_option("--samples", cfg.samples, "instances per reduction (default 200)");
  cc->add_option("--k-max", cfg.k_max, "largest k")->check(CLI::Range(3, 12))->capture_default_str();
  handlers["cross-check"] = [&] { return cmd_cross_check(cfg, out); };

  auto* en = sub("enumerate", "list canonical families for one (m, k)");
  add_common(en);
  en->add_option("-m,--m", cfg.enum_m, "number of groups")->required()->check(CLI::Range(1, 8));
  en->add_option("-k,--k", cfg.enum_k, "dimension")->required()->check(CLI::Range(1, 16));
  en->add_flag("--all", cfg.all_families, "include condition-violating families");
  en->add_flag("--count-only", cfg.count_only, "print counts only");
  handlers["enumerate"] = [&] { return cmd_enumerate(cfg, out); };

  auto* con = sub("construct", "build a generator matrix with the given zero pattern");
  con->add_option("--rowsets", cfg.rowsets, "{\"k\",\"n\",\"rowsets\"} as inline JSON");
  con->add_option("--file", cfg.file, "read JSON from a file, '-' for stdin");
  add_common(con);
  con->add_option("--max-attempts", cfg.max_attempts, "alpha draws per field size")->check(CLI::Range(1, 1 << 20))->capture_default_str();
  handlers["construct"] = [&] { return cmd_construct(cfg, out); };

  auto* mds = sub("mds-check", "check every k x k minor of G");
  mds->add_option("--artifact", cfg.family, "{\"p\",\"G\"} or construct output as inline JSON");
  mds->add_option("--file", cfg.file, "read JSON from a file, '-' for stdin");
  add_common(mds);
  handlers["mds-check"] = [&] { return cmd_mds_check(cfg, out); };

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("gmmds");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? affirmative : usage_error;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return handlers.at(name)();
  } catch (const InfeasibleError& e) {
    return infeasible(out, cfg, name, e);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  }
}

}  // namespace gmmds::cli
