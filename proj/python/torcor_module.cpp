#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "torcor/correlation.hpp"
#include "torcor/discrepancy.hpp"
#include "torcor/energy.hpp"
#include "torcor/error.hpp"
#include "torcor/experiments.hpp"
#include "torcor/json.hpp"
#include "torcor/seqio.hpp"
#include "torcor/spectral.hpp"

namespace py = pybind11;
using namespace torcor;
using nlohmann::json;

namespace {

// Structured results cross the boundary as JSON text; the Python wrapper decodes them.
template <class T>
std::string as_json(const T& v) {
  return json(v).dump();
}

TorusSequence from_words(py::array_t<std::uint64_t, py::array::c_style | py::array::forcecast> words) {
  const auto view = words.unchecked<1>();
  std::vector<TorusPoint> pts;
  pts.reserve(static_cast<std::size_t>(view.shape(0)));
  for (py::ssize_t i = 0; i < view.shape(0); ++i) pts.emplace_back(view(i));
  return TorusSequence::from_points(std::move(pts));
}

py::array_t<std::uint64_t> words_of(const TorusSequence& s) {
  py::array_t<std::uint64_t> out(static_cast<py::ssize_t>(s.size()));
  auto w = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < s.size(); ++i) w(static_cast<py::ssize_t>(i)) = s.points[i].word();
  return out;
}

py::array_t<double> floats_of(const TorusSequence& s) {
  py::array_t<double> out(static_cast<py::ssize_t>(s.size()));
  auto w = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < s.size(); ++i) w(static_cast<py::ssize_t>(i)) = s.points[i].to_double();
  return out;
}

WeylMethod parse_method(const std::string& m) {
  if (m == "auto") return WeylMethod::automatic;
  if (m == "direct") return WeylMethod::direct;
  if (m == "fast") return WeylMethod::fast;
  throw InvalidArgument("method must be auto, direct or fast");
}

MemoryBudget budget_of(std::optional<std::string> text) {
  return text ? MemoryBudget::parse(*text) : MemoryBudget::from_env();
}

}  // namespace

PYBIND11_MODULE(_torcor, m) {
  m.doc() = "Exact correlation counting, Weyl sums and discrepancy on the torus";

  // translators run most recent first, so the base class goes first
  py::register_exception<Error>(m, "TorcorError", PyExc_RuntimeError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_MemoryError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  py::class_<TorusSequence>(m, "Sequence")
      .def(py::init(&from_words), py::arg("words"))
      .def("__len__", &TorusSequence::size)
      .def_property_readonly("words", &words_of)
      .def("to_float", &floats_of)
      .def_property_readonly("provenance", [](const TorusSequence& s) { return provenance_to_json(s.provenance, -1); })
      .def("save", [](const TorusSequence& s, const std::string& path) { save_sequence(s, path); }, py::arg("path"));

  m.def("load", [](const std::string& path) { return load_sequence(path); }, py::arg("path"));
  m.def("golden_word", [] { return kGoldenFraction.word(); });
  m.def("reduce", [](double x) { return reduce(x).word(); }, py::arg("x"));

  m.def("gen_uniform", &gen_uniform, py::arg("seed"), py::arg("n"));
  m.def("gen_equispaced", &gen_equispaced, py::arg("n"));
  m.def(
      "gen_kronecker", [](std::uint64_t alpha, unsigned degree, std::size_t n) {
        return gen_kronecker(TorusPoint(alpha), degree, n);
      },
      py::arg("alpha_word"), py::arg("degree"), py::arg("n"));
  m.def("gen_mirrored", &gen_mirrored, py::arg("seed"), py::arg("n"));
  m.def("gen_duplicated", &gen_duplicated, py::arg("seed"), py::arg("n"));
  m.def("gen_perturbed_pairs", &gen_perturbed_pairs, py::arg("seed"), py::arg("n"));
  m.def(
      "gen_dilated", [](const std::vector<std::uint64_t>& a, std::uint64_t alpha) {
        return gen_dilated(a, TorusPoint(alpha));
      },
      py::arg("a"), py::arg("alpha_word"));

  m.def("multiset_equal_count", &multiset_equal_count, py::arg("n"), py::arg("k"));
  m.def(
      "count_kfold_json",
      [](const TorusSequence& s, unsigned k, const std::string& alpha, const std::vector<std::string>& s_values,
         const std::string& cmp, std::optional<std::string> budget) {
        CorrelationQuery q{k, alpha.empty() ? Rational(k) : Rational::parse(alpha), {}, parse_comparison(cmp)};
        for (const auto& v : s_values) q.s_values.push_back(Rational::parse(v));
        std::vector<CorrelationResult> r;
        {
          py::gil_scoped_release release;
          r = count_kfold(s, q, budget_of(budget));
        }
        return as_json(r);
      },
      py::arg("seq"), py::arg("k"), py::arg("alpha"), py::arg("s"), py::arg("cmp"), py::arg("budget") = py::none());
  m.def(
      "correlation_discrepancy_json",
      [](const TorusSequence& s, unsigned k, std::uint64_t t) { return as_json(correlation_discrepancy(s, k, t)); },
      py::arg("seq"), py::arg("k"), py::arg("t"));
  m.def("grepstad_larcher_F", &grepstad_larcher_F, py::arg("seq"), py::arg("t"));

  m.def(
      "weyl_sums",
      [](const TorusSequence& s, std::uint64_t max_frequency, const std::string& method) {
        WeylSumTable t;
        {
          py::gil_scoped_release release;
          t = weyl_sums(s, max_frequency, parse_method(method));
        }
        py::array_t<std::complex<double>> out(static_cast<py::ssize_t>(t.size()));
        std::copy(t.values.begin(), t.values.end(), out.mutable_data());
        return py::make_tuple(out, t.error_bound);
      },
      py::arg("seq"), py::arg("max_frequency"), py::arg("method") = "auto");
  m.def("fourier_identity_check_json",
        [](const TorusSequence& s, unsigned k, double t, std::uint64_t max_frequency) {
          return as_json(fourier_identity_check(s, k, t, max_frequency));
        },
        py::arg("seq"), py::arg("k"), py::arg("t"), py::arg("max_frequency"));
  m.def("triangle_fhat", &triangle_fhat, py::arg("xi"), py::arg("t"));
  m.def("lemma_cutoff", &lemma_cutoff, py::arg("n"), py::arg("alpha"), py::arg("t"));

  m.def("exact_discrepancy", py::overload_cast<const TorusSequence&>(&exact_discrepancy), py::arg("seq"));
  m.def("grid_discrepancy", &grid_discrepancy, py::arg("seq"), py::arg("grid"));
  m.def(
      "erdos_turan_bound",
      [](const TorusSequence& s, std::uint64_t cutoff, double c_add, double c_mul) {
        const auto t = weyl_sums(s, std::max<std::uint64_t>(cutoff, 1));
        return erdos_turan_bound(t, cutoff, {c_add, c_mul});
      },
      py::arg("seq"), py::arg("m"), py::arg("c_add") = 1.0, py::arg("c_mul") = 3.0);
  m.def(
      "theorem5_bound_json",
      [](unsigned k, double t, std::uint64_t n, double d2k) {
        BoundInputs in;
        in.k = k;
        in.t = t;
        in.n = n;
        in.d2k = d2k;
        in.alpha = k;
        return as_json(theorem5_bound(in));
      },
      py::arg("k"), py::arg("t"), py::arg("n"), py::arg("d2k"));
  m.def(
      "alpha_bound",
      [](unsigned k, double t, std::uint64_t n, double f, double alpha) {
        BoundInputs in;
        in.k = k;
        in.t = t;
        in.n = n;
        in.f = f;
        in.alpha = alpha;
        return alpha_bound(in);
      },
      py::arg("k"), py::arg("t"), py::arg("n"), py::arg("f"), py::arg("alpha"));
  m.def("random_envelope", &random_envelope, py::arg("k"), py::arg("n"));
  m.def(
      "key_inequality_json",
      [](const TorusSequence& s, unsigned k, std::uint64_t t) { return as_json(key_inequality_check(s, k, t)); },
      py::arg("seq"), py::arg("k"), py::arg("t"));
  m.def(
      "discrepancy_report_json",
      [](const TorusSequence& s, std::uint64_t cutoff, unsigned k, std::uint64_t t) {
        return as_json(discrepancy_report(s, cutoff, k, t));
      },
      py::arg("seq"), py::arg("m"), py::arg("k"), py::arg("t"));

  m.def(
      "additive_energy",
      [](const std::vector<py::int_>& a) -> py::int_ {
        // Values of any size: route through the multiprecision path when needed.
        std::vector<BigInt> big;
        big.reserve(a.size());
        bool fits = true;
        for (const auto& v : a) {
          big.emplace_back(std::string(py::reinterpret_steal<py::str>(PyObject_Str(v.ptr()))));
          if (big.back() > BigInt(std::numeric_limits<std::uint64_t>::max()) || big.back() < 0) fits = false;
        }
        if (fits) {
          std::vector<std::uint64_t> small(big.size());
          for (std::size_t i = 0; i < big.size(); ++i) small[i] = static_cast<std::uint64_t>(big[i]);
          return py::int_(additive_energy(small));
        }
        const BigInt e = additive_energy(std::span<const BigInt>(big));
        return py::reinterpret_steal<py::int_>(PyLong_FromString(e.str().c_str(), nullptr, 10));
      },
      py::arg("a"));

  m.def(
      "run_preset_json",
      [](const std::string& id, std::uint64_t seed, const std::string& tier, std::optional<std::string> out_dir) {
        Report r;
        {
          py::gil_scoped_release release;
          r = run_preset(parse_preset(id), seed, parse_tier(tier));
          if (out_dir) write_report(r, *out_dir);
        }
        json j = r.to_json();
        j["passed"] = r.passed();
        return j.dump();
      },
      py::arg("id"), py::arg("seed") = 1, py::arg("tier") = "default", py::arg("out_dir") = py::none());
  m.def("preset_names", [] {
    std::vector<std::string> names;
    for (auto id : kAllPresets) names.emplace_back(to_string(id));
    return names;
  });
}
