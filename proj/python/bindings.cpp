// Python entry points. Structured results cross the boundary as JSON text;
// the package wrapper turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cpg/io.hpp"

namespace py = pybind11;
using namespace cpg;

namespace {

ModePair modes_arg(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return ModePair::same(parse_mode(s));
  return {parse_mode(s.substr(0, slash)), parse_mode(s.substr(slash + 1))};
}

TransitionMatrix matrix_arg(const std::vector<std::vector<double>>& rows) {
  return TransitionMatrix::from_rows(rows);
}

std::vector<std::vector<double>> rows_of(const TransitionMatrix& t) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto r = t.row(i);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

TieMode ties_arg(const std::string& s) {
  if (s == "lowest") return TieMode::lowest_index;
  if (s == "expand") return TieMode::expand;
  throw ParseError("ties must be 'lowest' or 'expand'");
}

}  // namespace

PYBIND11_MODULE(_cpg, m) {
  m.doc() = "Cyber physical games: simulation, transition matrices, exact rates";

  // Translators run newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigMismatchError>(m, "ConfigMismatchError", PyExc_ValueError);

  m.def("version", [] { return std::string(version()); });

  m.def(
      "exact_rates",
      [](const std::string& modes, std::size_t poll_cap, bool leaves) {
        return to_json(exhaustive_collab_rates(modes_arg(modes), poll_cap), leaves).dump();
      },
      py::arg("modes"), py::arg("poll_cap") = kDefaultPollCap, py::arg("leaves") = false);

  m.def(
      "payoffs",
      [](const std::string& modes, bool exclusive, bool whole_percent) {
        const auto r = exhaustive_collab_rates(modes_arg(modes));
        return to_json(steps_per_satisfaction(
                           r, {exclusive ? PayoffBasis::exclusive : PayoffBasis::total, whole_percent}))
            .dump();
      },
      py::arg("modes"), py::arg("exclusive") = false, py::arg("whole_percent") = false);

  m.def(
      "run_collab",
      [](const std::string& modes, std::size_t iterations, std::uint64_t seed,
         std::uint64_t replication) {
        const auto run = run_collab(modes_arg(modes), iterations, seed, replication);
        Json j = to_json(run.report);
        j["comparison"] = to_json(compare(run.report, exhaustive_collab_rates(run.report.modes)));
        return j.dump();
      },
      py::arg("modes"), py::arg("iterations"), py::arg("seed"), py::arg("replication") = 0);

  m.def(
      "run_adver",
      [](const std::string& modes, std::size_t ticks, std::uint64_t seed,
         std::vector<double> probs) {
        if (probs.size() != 3) throw ValidationError("probs takes three values");
        const auto run =
            run_adver(modes_arg(modes), OrderingProbs::make(probs[0], probs[1], probs[2]), ticks, seed);
        Json j = to_json(run.report);
        std::vector<std::uint32_t> states;
        for (const auto& s : run.trace.states) states.push_back(s.index());
        j["states"] = states;
        return j.dump();
      },
      py::arg("modes"), py::arg("ticks"), py::arg("seed"),
      py::arg("probs") = std::vector<double>{0.25, 0.25, 0.5});

  m.def(
      "build_matrix",
      [](const std::string& modes, std::vector<double> probs) {
        if (probs.size() != 3) throw ValidationError("probs takes three values");
        return rows_of(build_matrix(adver_policies(modes_arg(modes)),
                                    OrderingProbs::make(probs[0], probs[1], probs[2]))
                           .matrix);
      },
      py::arg("modes"), py::arg("probs") = std::vector<double>{0.25, 0.25, 0.5});

  m.def(
      "fixture_matrix",
      [](const std::string& mode) { return rows_of(fixture_matrix(fixture_for(parse_mode(mode)))); },
      py::arg("mode"));

  m.def(
      "most_likely_paths",
      [](const std::vector<std::vector<double>>& rows, const std::string& ties) {
        const auto t = matrix_arg(rows);
        t.validate(kFixtureTolerance);
        return most_likely_paths(t, ties_arg(ties)).paths;
      },
      py::arg("matrix"), py::arg("ties") = "lowest");
}
