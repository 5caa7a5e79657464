#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gmmds/cli.hpp"
#include "gmmds/construct.hpp"
#include "gmmds/json_io.hpp"
#include "gmmds/reduce.hpp"
#include "gmmds/tmatrix.hpp"
#include "gmmds/verify.hpp"

namespace py = pybind11;
using namespace gmmds;

namespace {

Family family_of(const std::string& text) { return family_from_json(parse_json(text)); }
Family tform_of(const std::string& text) {
  Family fam = family_of(text);
  return is_normalized(fam) ? fam : normalize(fam);
}

IdentityOptions id_options(std::uint64_t field_size, int trials, std::uint64_t seed, int exact_limit) {
  IdentityOptions o;
  o.field_size_hint = field_size;
  o.trials = trials;
  o.seed = seed;
  o.exact_limit = exact_limit;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "JSON-level bindings; the gmmds package wraps them with dicts";

  // Translators run newest first, so the subclass goes last.
  auto base = py::register_exception<Error>(m, "GmmdsError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());

  m.def("check_condition", [](const std::string& fam) { return to_json(check_condition(family_of(fam))).dump(); });
  m.def("normalize", [](const std::string& fam) { return family_to_json(normalize(family_of(fam))).dump(); });
  m.def("audit", [](const std::string& fam) { return to_json(audit(tform_of(fam))).dump(); });
  m.def("reduce", [](const std::string& fam) { return to_json(reduce_to_irreducible(tform_of(fam))).dump(); });

  m.def(
      "build_t",
      [](const std::string& fam_text, std::vector<Elem> alpha, std::uint64_t field_size) {
        const Family fam = tform_of(fam_text);
        const PrimeField f(default_prime(fam, field_size));
        for (auto& a : alpha) a = f.reduce(a);
        const TInstance t = build_t(f, fam, alpha);
        auto j = to_json(t, f.modulus());
        j["det"] = det(f, t.matrix);
        return j.dump();
      },
      py::arg("family"), py::arg("alpha"), py::arg("field_size") = 0);

  m.def(
      "identity_test",
      [](const std::string& fam, std::uint64_t field_size, int trials, std::uint64_t seed, int exact_limit) {
        py::gil_scoped_release release;
        return to_json(decide_identity(tform_of(fam), id_options(field_size, trials, seed, exact_limit))).dump();
      },
      py::arg("family"), py::arg("field_size") = 0, py::arg("trials") = 8, py::arg("seed") = 0, py::arg("exact_limit") = 8);

  m.def(
      "certificate",
      [](const std::string& fam_text, std::vector<Elem> alpha, std::uint64_t field_size) {
        const Family fam = tform_of(fam_text);
        const PrimeField f(default_prime(fam, field_size));
        for (auto& a : alpha) a = f.reduce(a);
        const TInstance t = build_t(f, fam, alpha);
        const auto cert = extract_certificate(f, t);
        json j;
        j["singular"] = cert.has_value();
        if (cert) {
          j["certificate"] = to_json(*cert);
          j["valid"] = certificate_valid(f, t, *cert);
        }
        return j.dump();
      },
      py::arg("family"), py::arg("alpha"), py::arg("field_size") = 0);

  m.def(
      "enumerate_count",
      [](int m_, int k, bool condition_only) { return enumerate_families(m_, k, condition_only, [](const CanonicalFamily&) {}); },
      py::arg("m"), py::arg("k"), py::arg("condition_only") = true);

  m.def(
      "verify",
      [](int m_max, int k_max, std::uint64_t seed, int jobs) {
        GridOptions o;
        o.m_max = m_max;
        o.k_max = k_max;
        o.seed = seed;
        o.jobs = jobs;
        py::gil_scoped_release release;
        return to_json(verify_grid(o)).dump();
      },
      py::arg("m_max") = 3, py::arg("k_max") = 4, py::arg("seed") = 0, py::arg("jobs") = 1);

  m.def(
      "construct",
      [](const std::string& rows_text, std::uint64_t field_size, std::uint64_t seed) {
        const auto in = rowsets_from_json(parse_json(rows_text));
        ConstructOptions o;
        o.field_size_hint = field_size;
        o.seed = seed;
        return to_json(construct_code(in.rowsets, in.n, in.k, o)).dump();
      },
      py::arg("rowsets"), py::arg("field_size") = 0, py::arg("seed") = 0);

  m.def("mds_check", [](const std::string& artifact) {
    const CodeArtifact a = artifact_from_json(parse_json(artifact));
    const auto failing = mds_check(PrimeField(a.p), a.G);
    json j;
    j["mds"] = !failing.has_value();
    if (failing) j["failing_columns"] = *failing;
    return j.dump();
  });

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        std::ostringstream out, err;
        args.insert(args.begin(), "gmmds");
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
