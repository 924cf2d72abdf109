// Copyright 2026 The stpart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stpart/export.hpp"
#include "stpart/planner.hpp"
#include "stpart/scenario_io.hpp"

namespace py = pybind11;
using namespace stpart;

namespace {

std::vector<std::string> path_strings(const SignaturePath & path)
{
  std::vector<std::string> out;
  for (const auto & s : path.steps) { out.push_back(s.str()); }
  return out;
}

py::dict result_dict(const PlanResult & r)
{
  py::dict d;
  d["found"] = r.found();
  d["cost"] = r.cost;
  d["margin"] = r.margin;
  d["path"] = path_strings(r.path);
  if (r.trajectory) {
    Eigen::MatrixXd states(static_cast<Eigen::Index>(r.trajectory->states.size()), 4);
    for (std::size_t p = 0; p < r.trajectory->states.size(); ++p) {
      states.row(static_cast<Eigen::Index>(p)) = r.trajectory->states[p].transpose();
    }
    Eigen::MatrixXd controls(static_cast<Eigen::Index>(r.trajectory->controls.size()), 2);
    for (std::size_t p = 0; p < r.trajectory->controls.size(); ++p) {
      controls.row(static_cast<Eigen::Index>(p)) = r.trajectory->controls[p].transpose();
    }
    d["states"] = states;
    d["controls"] = controls;
  } else {
    d["states"] = py::none();
    d["controls"] = py::none();
  }
  py::dict stats;
  stats["generated"] = r.stats.generated;
  stats["expanded"] = r.stats.expanded;
  stats["pruned_infeasible"] = r.stats.pruned_infeasible;
  stats["pruned_bound"] = r.stats.pruned_bound;
  stats["pruned_margin"] = r.stats.pruned_margin;
  stats["pruned_corridor"] = r.stats.pruned_corridor;
  stats["qp_solves"] = r.stats.qp_solves;
  stats["cache_hits"] = r.stats.cache_hits;
  d["stats"] = stats;
  py::dict timing;
  timing["partitioning_ms"] = r.timing.partitioning;
  timing["graph_exploration_ms"] = r.timing.graph_exploration;
  timing["optimal_path_computation_ms"] = r.timing.optimal_path;
  d["timing"] = timing;
  d["warnings"] = r.warnings;
  return d;
}

PlannerConfig config_for(const Scenario & scn, std::optional<double> margin_min)
{
  PlannerConfig c;
  c.margin_min = margin_min.value_or(scn.margin_min);
  return c;
}

Polyhedron polyhedron_from(const Eigen::MatrixXd & normals, const Eigen::VectorXd & offsets)
{
  if (normals.cols() != 2 || normals.rows() != offsets.size()) {
    throw std::invalid_argument("expected an (m, 2) normal matrix and m offsets");
  }
  Polyhedron p;
  for (Eigen::Index i = 0; i < normals.rows(); ++i) { p.add_row({normals.row(i).transpose(), offsets(i)}); }
  return p;
}

}  // namespace

PYBIND11_MODULE(_stpart, m)
{
  m.doc() = "Semantic space-time partitioning and maneuver planning";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<OracleCapExceeded>(m, "OracleCapExceeded", PyExc_RuntimeError);

  py::class_<Scenario>(m, "Scenario")
    .def_property_readonly("steps", &Scenario::steps)
    .def_readonly("tau", &Scenario::tau)
    .def_readonly("horizon", &Scenario::horizon)
    .def_readonly("margin_min", &Scenario::margin_min)
    .def_property_readonly("obstacle_ids",
                           [](const Scenario & s) {
                             std::vector<int> ids;
                             for (const auto & t : s.obstacles) { ids.push_back(t.id); }
                             return ids;
                           })
    .def("to_json", [](const Scenario & s) { return dump_scenario(s); });

  m.def("parse_scenario", [](const std::string & text) {
    auto scn = parse_scenario(text);
    scn.validate();
    return scn;
  }, py::arg("text"));
  m.def("load_scenario", [](const std::string & path) {
    auto scn = load_scenario(path);
    scn.validate();
    return scn;
  }, py::arg("path"));

  m.def("partition", [](const Scenario & scn, int step) {
    if (step < 0 || step > scn.steps()) { throw py::index_error("step out of range"); }
    py::list out;
    for (const auto & c : partition_step(scn, step)) {
      py::dict d;
      d["signature"] = c.signature.str();
      d["step"] = c.step;
      d["witness"] = c.witness;
      Eigen::MatrixXd rows(static_cast<Eigen::Index>(c.poly.size()), 3);
      for (std::size_t i = 0; i < c.poly.size(); ++i) {
        const auto & r = c.poly.rows()[i];
        rows.row(static_cast<Eigen::Index>(i)) << r.normal.x(), r.normal.y(), r.offset;
      }
      d["rows"] = rows;
      out.append(d);
    }
    return out;
  }, py::arg("scenario"), py::arg("step"));

  py::class_<TransitionGraph>(m, "Graph")
    .def_property_readonly("steps", &TransitionGraph::steps)
    .def_property_readonly("tau", &TransitionGraph::tau)
    .def_property_readonly("vertex_count", &TransitionGraph::vertex_count)
    .def_property_readonly("edge_count", [](const TransitionGraph & g) { return g.edges().size(); })
    .def("signatures",
         [](const TransitionGraph & g) {
           std::vector<std::string> out;
           for (const auto & s : g.signatures()) { out.push_back(s.str()); }
           return out;
         })
    .def("validity",
         [](const TransitionGraph & g, const std::string & a, const std::string & b) {
           return validity_set(g, Signature::parse(a), Signature::parse(b)).intervals;
         },
         py::arg("from_sig"), py::arg("to_sig"))
    .def("time_margin",
         [](const TransitionGraph & g, const std::vector<std::string> & path) {
           SignaturePath p;
           for (const auto & s : path) { p.steps.push_back(Signature::parse(s)); }
           if (!is_valid_path(g, p)) { throw std::invalid_argument("not a path of this graph"); }
           return time_margin(g, p);
         },
         py::arg("path"))
    .def("validity_csv", [](const TransitionGraph & g) { return validity_csv(validity_table(g), g.tau()); })
    .def("to_json", [](const TransitionGraph & g) { return graph_json(g); })
    .def("to_dot", [](const TransitionGraph & g) { return graph_dot(g); });

  m.def("build_graph", [](const Scenario & scn) { return build_graph(scn); }, py::arg("scenario"));

  m.def("plan", [](const Scenario & scn, std::optional<double> margin_min) {
    return result_dict(plan(scn, config_for(scn, margin_min)));
  }, py::arg("scenario"), py::arg("margin_min") = py::none());

  m.def("enumerate_oracle", [](const Scenario & scn, std::optional<double> margin_min) {
    const auto g = build_graph(scn);
    return result_dict(enumerate_oracle(scn, g, config_for(scn, margin_min)));
  }, py::arg("scenario"), py::arg("margin_min") = py::none());

  m.def("margin_sweep", [](const Scenario & scn, const std::vector<double> & margins) {
    const auto g = build_graph(scn);
    py::list out;
    for (const auto & row : margin_sweep(scn, g, margins, config_for(scn, std::nullopt))) {
      py::dict d;
      d["margin_min"] = row.margin_min;
      d["found"] = row.status == PlanStatus::kFound;
      d["cost"] = row.cost;
      d["path_margin"] = row.path_margin;
      d["path"] = path_strings(row.path);
      out.append(d);
    }
    return out;
  }, py::arg("scenario"), py::arg("margins"));

  m.def("is_feasible", [](const Eigen::MatrixXd & normals, const Eigen::VectorXd & offsets, double epsilon) {
    const auto r = is_feasible(polyhedron_from(normals, offsets), epsilon);
    return py::make_tuple(r.feasible, Vec2(r.witness));
  }, py::arg("normals"), py::arg("offsets"), py::arg("epsilon") = kEpsLp);

  m.def("solve_qp", [](const Eigen::MatrixXd & H, const Eigen::VectorXd & g, const Eigen::MatrixXd & G,
                       const Eigen::VectorXd & h) {
    const auto r = solve_qp(DenseQp{H, g, G, h});
    py::dict d;
    d["status"] = std::string(to_string(r.status));
    d["x"] = r.x;
    d["y"] = r.y;
    d["objective"] = r.objective;
    d["iterations"] = r.iterations;
    return d;
  }, py::arg("H"), py::arg("g"), py::arg("G"), py::arg("h"));
}
