#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qzone/compare.hpp"
#include "qzone/hybrid.hpp"
#include "qzone/render.hpp"
#include "qzone/zoning.hpp"

namespace py = pybind11;
using namespace qzone;

namespace {

QuboModel make_model(std::size_t num_vars, const std::vector<double>& linear,
                     const std::vector<std::tuple<Index, Index, double>>& quadratic, double constant) {
  if (!linear.empty() && linear.size() != num_vars) {
    throw ValidationError("linear has " + std::to_string(linear.size()) + " entries for " +
                          std::to_string(num_vars) + " variables");
  }
  QuboBuilder builder(num_vars);
  for (Index i = 0; i < linear.size(); ++i) builder.add_linear(i, linear[i]);
  for (const auto& [i, j, v] : quadratic) builder.add_quadratic(i, j, v);
  builder.add_constant(constant);
  return builder.build();
}

}  // namespace

PYBIND11_MODULE(_qzone, m) {
  m.doc() = "Impact-guided QUBO decomposition for balanced zone bipartitioning";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  auto solver_error = py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<BackendError>(m, "BackendError", solver_error.ptr());

  py::class_<QuboModel>(m, "QuboModel")
      .def(py::init(&make_model), py::arg("num_vars"), py::arg("linear") = std::vector<double>{},
           py::arg("quadratic") = std::vector<std::tuple<Index, Index, double>>{},
           py::arg("constant") = 0.0)
      .def_property_readonly("num_vars", &QuboModel::num_vars)
      .def_property_readonly("constant", &QuboModel::constant)
      .def_property_readonly("linear",
                             [](const QuboModel& q) {
                               return std::vector<double>(q.linear().begin(), q.linear().end());
                             })
      .def_property_readonly("quadratic",
                             [](const QuboModel& q) {
                               std::vector<std::tuple<Index, Index, double>> out;
                               for (const auto& c : q.couplings()) out.emplace_back(c.i, c.j, c.value);
                               return out;
                             })
      .def("coupling", &QuboModel::coupling)
      .def("__eq__", [](const QuboModel& a, const QuboModel& b) { return a == b; })
      .def("__repr__", [](const QuboModel& q) {
        return "<QuboModel num_vars=" + std::to_string(q.num_vars()) +
               " couplings=" + std::to_string(q.num_couplings()) + ">";
      });

  m.def("evaluate", [](const QuboModel& q, const Assignment& x) { return evaluate(q, x); });
  m.def("delta_flip", [](const QuboModel& q, const Assignment& x, Index i) { return delta_flip(q, x, i); });
  m.def("impact_vector", [](const QuboModel& q, const Assignment& x) { return impact_vector(q, x); });
  m.def("from_symmetric_matrix", &from_symmetric_matrix, py::arg("q"), py::arg("constant") = 0.0);
  m.def("to_symmetric_matrix", &to_symmetric_matrix);

  py::class_<TrafficInstance>(m, "TrafficInstance")
      .def_readonly("rows", &TrafficInstance::rows)
      .def_readonly("cols", &TrafficInstance::cols)
      .def_readonly("num_attributes", &TrafficInstance::num_attributes)
      .def_readwrite("lambda_", &TrafficInstance::lambda)
      .def_readonly("seed", &TrafficInstance::seed)
      .def_property_readonly("num_zones", &TrafficInstance::num_zones)
      .def_property_readonly("edges",
                             [](const TrafficInstance& t) {
                               std::vector<std::tuple<Index, Index, double>> out;
                               for (const auto& e : t.edges) out.emplace_back(e.i, e.j, e.weight);
                               return out;
                             })
      .def_property_readonly("attributes", [](const TrafficInstance& t) {
        std::vector<std::vector<double>> rows(t.num_zones());
        for (std::size_t i = 0; i < rows.size(); ++i) {
          for (std::size_t k = 0; k < t.num_attributes; ++k) rows[i].push_back(t.attribute(i, k));
        }
        return rows;
      });

  m.def("generate_instance", &generate_instance, py::arg("rows"), py::arg("cols"),
        py::arg("num_attributes") = 3, py::arg("seed") = 0);
  m.def("read_instance", [](const std::string& path) { return read_instance(path); });
  m.def("write_instance", [](const TrafficInstance& t, const std::string& path) { write_instance(t, path); });
  m.def("balance_targets", &balance_targets);
  m.def("build_balance_qubo", &build_balance_qubo);
  m.def("build_adjacency_qubo", &build_adjacency_qubo);
  m.def("build_qubo", &build_qubo);
  m.def("count_cut_edges", [](const TrafficInstance& t, const Assignment& x) { return count_cut_edges(t, x); });

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("assignment", &SolveResult::assignment)
      .def_readonly("energy", &SolveResult::energy)
      .def_readonly("evaluations", &SolveResult::evaluations)
      .def_readonly("moves", &SolveResult::moves);

  m.def("solve_exact", &solve_exact, py::arg("model"), py::arg("cap") = 24);
  m.def(
      "solve_anneal",
      [](const QuboModel& q, std::size_t sweeps, std::uint64_t seed, double cooling_ratio) {
        SubSolverConfig c;
        c.kind = SubSolverKind::anneal;
        c.budget = sweeps;
        c.seed = seed;
        c.cooling_ratio = cooling_ratio;
        return solve_anneal(q, c);
      },
      py::arg("model"), py::arg("sweeps") = 200, py::arg("seed") = 0, py::arg("cooling_ratio") = 0.97);
  m.def(
      "solve_tabu",
      [](const QuboModel& q, std::size_t steps, std::uint64_t seed, std::size_t tenure) {
        SubSolverConfig c;
        c.kind = SubSolverKind::tabu;
        c.budget = steps;
        c.seed = seed;
        c.tabu_tenure = tenure;
        return solve_tabu(q, c);
      },
      py::arg("model"), py::arg("steps") = 200, py::arg("seed") = 0, py::arg("tenure") = 10);
  m.def("solve_greedy", [](const QuboModel& q, const Assignment& x0) { return solve_greedy(q, x0); });
  m.def(
      "solve_external",
      [](const QuboModel& q, const std::string& command, double timeout_s) {
        SubSolverConfig c;
        c.kind = SubSolverKind::external;
        c.external_command = command;
        c.external_timeout = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000));
        return solve_external(q, c);
      },
      py::arg("model"), py::arg("command") = "", py::arg("timeout_s") = 300.0);

  py::class_<ActiveSet>(m, "ActiveSet")
      .def_readonly("indices", &ActiveSet::indices)
      .def_readonly("impacts", &ActiveSet::impacts);
  py::class_<SubProblem>(m, "SubProblem")
      .def_readonly("model", &SubProblem::model)
      .def_readonly("global_indices", &SubProblem::global_indices);

  m.def("select_active_set",
        [](const QuboModel& q, const Assignment& x, std::size_t k, const std::string& ranking) {
          return select_active_set(q, x, k, parse_impact_ranking(ranking));
        },
        py::arg("model"), py::arg("x"), py::arg("q"), py::arg("ranking") = "most_negative");
  m.def("extract_subproblem", [](const QuboModel& q, const Assignment& x, const std::vector<Index>& active) {
    return extract_subproblem(q, x, active);
  });
  m.def("merge_solution", [](const Assignment& x, const SubProblem& sub, const Assignment& y) {
    return merge_solution(x, sub, y);
  });

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("iteration", &IterationRecord::iteration)
      .def_readonly("objective_before", &IterationRecord::objective_before)
      .def_readonly("objective_after", &IterationRecord::objective_after)
      .def_readonly("active", &IterationRecord::active)
      .def_readonly("accepted", &IterationRecord::accepted)
      .def_readonly("failed", &IterationRecord::failed)
      .def_readonly("subsolver_evaluations", &IterationRecord::subsolver_evaluations);

  py::class_<RunTrajectory>(m, "RunTrajectory")
      .def_readonly("initial_objective", &RunTrajectory::initial_objective)
      .def_readonly("iterations", &RunTrajectory::iterations)
      .def_property_readonly("assignment", [](const RunTrajectory& t) { return t.final.assignment; })
      .def_property_readonly("objective", [](const RunTrajectory& t) { return t.final.objective; })
      .def_property_readonly("termination", [](const RunTrajectory& t) { return to_string(t.termination); })
      .def("to_csv", &trajectory_to_csv);

  m.def(
      "run_hybrid",
      [](const QuboModel& q, std::size_t active_size, const std::string& selection, const std::string& subsolver,
         std::size_t subsolver_budget, std::size_t max_iterations, std::size_t patience, const std::string& init,
         std::uint64_t seed, const std::string& ranking) {
        HybridConfig c;
        c.ranking = parse_impact_ranking(ranking);
        c.q = active_size;
        c.selection = parse_selection_policy(selection);
        c.subsolver.kind = parse_subsolver_kind(subsolver);
        c.subsolver.budget = subsolver_budget;
        c.subsolver.seed = seed;
        c.max_iterations = max_iterations;
        c.patience = patience;
        c.init = parse_init_policy(init);
        c.seed = seed;
        return run_hybrid(q, c);
      },
      py::arg("model"), py::arg("q") = 16, py::arg("selection") = "impact", py::arg("subsolver") = "auto",
      py::arg("subsolver_budget") = 200, py::arg("max_iterations") = 20, py::arg("patience") = 2,
      py::arg("init") = "zeros", py::arg("seed") = 0, py::arg("ranking") = "most_negative");
  m.def(
      "run_direct",
      [](const QuboModel& q, const std::string& subsolver, std::size_t budget, std::uint64_t seed) {
        SubSolverConfig c;
        c.kind = parse_subsolver_kind(subsolver);
        c.budget = budget;
        c.seed = seed;
        return run_direct(q, c);
      },
      py::arg("model"), py::arg("subsolver") = "auto", py::arg("budget") = 200, py::arg("seed") = 0);

  m.def(
      "compare_methods",
      [](const QuboModel& q, const std::vector<std::uint64_t>& seeds, std::size_t budget, std::size_t active_size) {
        CompareOptions o;
        o.seeds = seeds;
        o.budget = budget;
        o.q = active_size;
        return report_to_json(compare_methods(q, o));
      },
      py::arg("model"), py::arg("seeds"), py::arg("budget") = 256'000, py::arg("q") = 16,
      "Runs every method under a matched budget and returns the JSON report.");

  m.def(
      "render_svg",
      [](const TrafficInstance& t, const Assignment& x, std::size_t cell_size, bool show_boundary) {
        RenderSpec spec;
        spec.cell_size = cell_size;
        spec.show_boundary = show_boundary;
        return render_partition_svg(t, x, spec);
      },
      py::arg("instance"), py::arg("assignment"), py::arg("cell_size") = 24, py::arg("show_boundary") = true);
}
