#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pa/empirics.hpp"
#include "pa/errors.hpp"
#include "pa/generator.hpp"
#include "pa/optimize.hpp"
#include "pa/oracle.hpp"
#include "pa/rare_events.hpp"
#include "pa/rates.hpp"

namespace py = pybind11;

namespace {

std::vector<double> default_mu(const pa::WeightSpec& spec, std::vector<double> mu) {
  if (!mu.empty()) return mu;
  return std::vector<double>(spec.num_colors(), 1.0 / static_cast<double>(spec.num_colors()));
}

py::dict rate_dict(const pa::RateValue& r) {
  py::dict d;
  d["value"] = r.value;
  d["tail_bound"] = r.tail_bound;
  d["terms"] = r.terms;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = PREFATTACH_VERSION;

  py::register_exception<pa::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<pa::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<pa::StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<pa::Infeasible>(m, "Infeasible", PyExc_RuntimeError);
  py::register_exception<pa::CorruptedLog>(m, "CorruptedLog", PyExc_RuntimeError);

  py::class_<pa::WeightSpec>(m, "WeightSpec")
      .def(py::init<std::vector<std::string>, std::vector<double>, std::vector<std::vector<double>>,
                    std::vector<std::vector<double>>, bool>(),
           py::arg("colors"), py::arg("bucket_ends"), py::arg("gamma"), py::arg("beta"),
           py::arg("allow_zero_beta") = false)
      .def_static("plain", &pa::WeightSpec::plain, py::arg("gamma") = 1.0, py::arg("beta") = 1.0)
      .def_static("uniform_colors", &pa::WeightSpec::uniform_colors, py::arg("num_colors"), py::arg("gamma") = 1.0,
                  py::arg("beta") = 1.0)
      .def_property_readonly("num_colors", &pa::WeightSpec::num_colors)
      .def_property_readonly("colors", &pa::WeightSpec::colors)
      .def("c", &pa::WeightSpec::c, py::arg("bucket") = 0);

  py::class_<pa::DegreeMeasure>(m, "DegreeMeasure")
      .def(py::init<std::vector<double>, double>(), py::arg("probs"), py::arg("tail_mass") = 0.0)
      .def_property_readonly("probs", [](const pa::DegreeMeasure& l) {
        return std::vector<double>(l.probs().begin(), l.probs().end());
      })
      .def_property_readonly("tail_mass", &pa::DegreeMeasure::tail_mass)
      .def_property_readonly("kmax", &pa::DegreeMeasure::kmax)
      .def("__getitem__", &pa::DegreeMeasure::operator[])
      .def("__len__", [](const pa::DegreeMeasure& l) { return l.kmax() + 1; })
      .def("__repr__", [](const pa::DegreeMeasure& l) {
        std::ostringstream os;
        os << "DegreeMeasure(kmax=" << l.kmax() << ", tail_mass=" << l.tail_mass() << ")";
        return os.str();
      });

  py::class_<pa::EventLog>(m, "EventLog")
      .def_readonly("n", &pa::EventLog::n)
      .def_readonly("num_colors", &pa::EventLog::num_colors)
      .def_readonly("colors", &pa::EventLog::colors)
      .def_property_readonly("events", [](const pa::EventLog& log) {
        std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t>> out;
        out.reserve(log.events.size());
        for (const auto& e : log.events) out.emplace_back(e.m, e.parent, e.parent_color, e.child_color, e.parent_indegree);
        return out;
      })
      .def("final_indegrees", [](const pa::EventLog& log) { return pa::final_indegrees(log); })
      .def("to_csv", [](const pa::EventLog& log) { return pa::to_csv(log); })
      .def_static("from_csv", [](const std::string& text, std::size_t num_colors) {
        std::istringstream in(text);
        return pa::read_csv(in, num_colors);
      }, py::arg("text"), py::arg("num_colors") = 0);

  m.def("generate", [](std::uint32_t n, const pa::WeightSpec& spec, std::vector<double> mu, std::uint64_t seed,
                       std::uint64_t stream) {
    return pa::generate(spec, default_mu(spec, std::move(mu)), n, seed, stream);
  }, py::arg("n"), py::arg("spec") = pa::WeightSpec::plain(1, 1), py::arg("mu") = std::vector<double>{},
        py::arg("seed") = 1, py::arg("stream") = 0, py::call_guard<py::gil_scoped_release>());

  m.def("attachment_law", [](const pa::EventLog& log) { return pa::attachment_measure(log).degree_marginal(); },
        py::arg("log"));
  m.def("vertex_law", &pa::vertex_degree_measure, py::arg("log"));

  m.def("pi_f", py::overload_cast<double, double, std::size_t>(&pa::pi_f), py::arg("gamma") = 1.0,
        py::arg("beta") = 1.0, py::arg("kmax") = 200);
  m.def("rate_I", [](const pa::DegreeMeasure& l, double gamma, double beta) {
    return rate_dict(pa::rate_I(l, gamma, beta));
  }, py::arg("l"), py::arg("gamma") = 1.0, py::arg("beta") = 1.0);
  m.def("jensen_floor", [](const pa::DegreeMeasure& l, double gamma, double beta) {
    const auto f = pa::jensen_floor(l, gamma, beta);
    return py::make_tuple(f.floor, f.reference_mass);
  }, py::arg("l"), py::arg("gamma") = 1.0, py::arg("beta") = 1.0);

  m.def("oracle_law", [](std::uint32_t n, const pa::WeightSpec& spec, std::vector<double> mu) {
    const auto law = pa::exact_law(pa::exact_attachment_measure, spec, default_mu(spec, std::move(mu)), n);
    std::vector<std::pair<std::vector<std::string>, std::string>> out;
    for (const auto& [key, p] : law) {
      std::vector<std::string> coords;
      for (const auto& q : key) coords.push_back(pa::to_string(q));
      out.emplace_back(coords, pa::to_string(p));
    }
    return out;
  }, py::arg("n"), py::arg("spec") = pa::WeightSpec::plain(1, 1), py::arg("mu") = std::vector<double>{});

  m.def("exact_event_probability", [](const std::string& event, std::uint32_t n, const pa::WeightSpec& spec,
                                      std::vector<double> mu) {
    return pa::to_string(
        pa::exact_event_probability(pa::Predicate::parse(event), spec, default_mu(spec, std::move(mu)), n));
  }, py::arg("event"), py::arg("n"), py::arg("spec") = pa::WeightSpec::plain(1, 1),
        py::arg("mu") = std::vector<double>{});

  m.def("naive_estimate", [](const std::string& event, std::uint32_t n, std::size_t reps, std::uint64_t seed,
                             const pa::WeightSpec& spec, std::vector<double> mu) {
    const auto e = pa::naive_estimate(pa::Predicate::parse(event), spec, default_mu(spec, std::move(mu)), n, reps, seed);
    py::dict d;
    d["p_hat"] = e.p_hat;
    d["std_error"] = e.std_error;
    d["hits"] = e.hits;
    return d;
  }, py::arg("event"), py::arg("n"), py::arg("reps"), py::arg("seed") = 1,
        py::arg("spec") = pa::WeightSpec::plain(1, 1), py::arg("mu") = std::vector<double>{});

  m.def("importance_estimate", [](const std::string& event, std::uint32_t n, std::size_t reps, std::uint64_t seed,
                                  double gamma, double beta, std::size_t kmax) {
    const auto spec = pa::WeightSpec::plain(gamma, beta);
    const auto pred = pa::Predicate::parse(event);
    const auto tilt = pa::event_tilt(pred, spec, kmax, seed);
    const auto e = pa::is_estimate(pred, spec, {1.0}, tilt, n, reps, seed);
    py::dict d;
    d["p_hat"] = e.p_hat;
    d["std_error"] = e.std_error;
    d["ess"] = e.ess;
    d["hits"] = e.hits;
    d["mean_weight"] = e.mean_weight;
    d["mean_weight_std_error"] = e.mean_weight_std_error;
    return d;
  }, py::arg("event"), py::arg("n"), py::arg("reps"), py::arg("seed") = 1, py::arg("gamma") = 1.0,
        py::arg("beta") = 1.0, py::arg("kmax") = 30);

  m.def("minimize_rate_I", [](const std::string& constraints, std::size_t kmax, double gamma, double beta) {
    const auto r = pa::minimize_rate_I(pa::Predicate::parse(constraints), gamma, beta, kmax);
    py::dict d;
    d["value"] = r.value;
    d["l_star"] = r.l_star;
    d["converged"] = r.converged;
    d["residual"] = r.residual;
    return d;
  }, py::arg("constraints"), py::arg("kmax"), py::arg("gamma") = 1.0, py::arg("beta") = 1.0);

  m.def("contraction_gap", [](const pa::DegreeMeasure& l, const std::vector<double>& mu, const pa::WeightSpec& spec,
                              std::size_t kmax) { return pa::contraction_check(l, mu, spec, kmax).gap; },
        py::arg("l"), py::arg("mu"), py::arg("spec"), py::arg("kmax"));

  m.def("decay_scan", [](const std::string& event, const std::vector<std::uint32_t>& n_list,
                         const pa::WeightSpec& spec, std::vector<double> mu) {
    py::list out;
    for (const auto& r : pa::decay_rate_scan(pa::Predicate::parse(event), n_list, spec, default_mu(spec, std::move(mu)))) {
      py::dict d;
      d["n"] = r.n;
      d["method"] = r.method;
      d["p_hat"] = r.p_hat;
      d["exact"] = r.exact;
      d["decay"] = r.decay;
      out.append(d);
    }
    return out;
  }, py::arg("event"), py::arg("n_list"), py::arg("spec") = pa::WeightSpec::plain(1, 1),
        py::arg("mu") = std::vector<double>{});
}
