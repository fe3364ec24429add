#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "plancurate/embedding.hpp"
#include "plancurate/evaluation.hpp"
#include "plancurate/formats.hpp"
#include "plancurate/generation.hpp"
#include "plancurate/nl_codec.hpp"
#include "plancurate/pipeline.hpp"
#include "plancurate/selection.hpp"
#include "plancurate/solver.hpp"

namespace py = pybind11;
using namespace plancurate;

namespace {

std::vector<std::string> plan_lines(const Plan& plan) {
  std::vector<std::string> out;
  for (const auto& a : plan.actions) out.push_back(render_action(a));
  return out;
}

Plan parse_or_throw(const std::string& text, Domain domain) {
  auto r = parse_plan(text, domain);
  if (auto* err = std::get_if<ParseError>(&r)) {
    throw py::value_error("line " + std::to_string(err->line) + ": " +
                          std::string(parse_reason_code(err->reason)) + ": " + err->text);
  }
  return std::get<Plan>(r);
}

py::dict solve_dict(const TaskInstance& task, std::uint64_t max_nodes, double max_seconds) {
  auto r = solve_optimal(task, {max_nodes, max_seconds});
  py::dict d;
  d["status"] = std::string(status_name(r.status));
  d["length"] = r.length ? py::cast(*r.length) : py::none();
  d["plan"] = r.plan ? py::cast(plan_lines(*r.plan)) : py::none();
  d["expanded"] = r.expanded;
  return d;
}

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  d["verdict"] = std::string(verdict_name(v.kind));
  d["valid"] = v.valid();
  d["length"] = v.length;
  d["optimal_length"] = v.optimal_length ? py::cast(*v.optimal_length) : py::none();
  d["is_optimal"] = v.is_optimal ? py::cast(*v.is_optimal) : py::none();
  d["failed_step"] = v.failed_step ? py::cast(*v.failed_step) : py::none();
  d["reason"] = v.reason ? py::cast(std::string(reason_code(*v.reason))) : py::none();
  if (v.parse_error) {
    d["parse_error"] = py::make_tuple(v.parse_error->line,
                                      std::string(parse_reason_code(v.parse_error->reason)));
  } else {
    d["parse_error"] = py::none();
  }
  return d;
}

py::dict selection_dict(const SelectionResult& r) {
  py::dict d;
  d["method"] = r.method;
  d["ids"] = r.selected_ids;
  d["indices"] = r.selected_indices;
  d["diversity"] = r.diversity;
  d["cluster_sizes"] = r.cluster_sizes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Planning task generation, optimal labelling and diversity-based curation";
  m.attr("__version__") = std::string(kToolVersion);

  py::register_exception<Error>(m, "PlancurateError");

  py::class_<TaskInstance>(m, "Task")
      .def_static(
          "from_json", [](const std::string& s) { return task_from_json(nlohmann::json::parse(s)); },
          py::arg("text"))
      .def("to_json", [](const TaskInstance& t) { return task_to_json(t).dump(); })
      .def_property_readonly("id", &TaskInstance::id)
      .def_property_readonly("domain", [](const TaskInstance& t) { return std::string(domain_name(t.domain())); })
      .def_property_readonly("size", &TaskInstance::size_key)
      .def("render", &render_task)
      .def("statement", &render_statement)
      .def("__eq__", [](const TaskInstance& a, const TaskInstance& b) { return a == b; })
      .def("__hash__", [](const TaskInstance& t) { return py::hash(py::str(t.id())); })
      .def("__repr__", [](const TaskInstance& t) {
        return "<Task " + std::string(domain_name(t.domain())) + " " + t.id() + ">";
      });

  m.def(
      "generate",
      [](const std::string& domain, std::size_t count, std::uint64_t seed, int n_blocks) {
        GenSpec spec;
        spec.domain = parse_domain(domain);
        spec.count = count;
        spec.seed = seed;
        spec.n_blocks = n_blocks;
        py::gil_scoped_release release;
        return generate(spec);
      },
      py::arg("domain") = "blocksworld", py::arg("count"), py::arg("seed") = 0,
      py::arg("n_blocks") = 4);

  m.def("task_space", &blocksworld_task_space, py::arg("n_blocks"));
  m.def("count_states", &count_tower_arrangements, py::arg("n_blocks"));

  m.def(
      "worked_example",
      [](const std::string& domain) {
        auto [task, plan] = worked_example(parse_domain(domain));
        return py::make_tuple(task, plan_lines(plan));
      },
      py::arg("domain"));

  m.def("solve", &solve_dict, py::arg("task"), py::arg("max_nodes") = 5'000'000,
        py::arg("max_seconds") = 60.0);

  m.def(
      "render_prompt",
      [](const TaskInstance& task, bool one_shot) {
        if (!one_shot) return render_prompt(task, PromptStyle::zero_shot());
        auto [t, p] = worked_example(task.domain());
        return render_prompt(task, PromptStyle::one_shot(t, p));
      },
      py::arg("task"), py::arg("one_shot") = false);

  m.def(
      "render_plan",
      [](const std::vector<std::string>& actions, const std::string& domain) {
        std::string text;
        for (const auto& a : actions) text += a + "\n";
        return render_plan(parse_or_throw(text, parse_domain(domain)));
      },
      py::arg("actions"), py::arg("domain"));

  m.def(
      "parse_plan",
      [](const std::string& text, const std::string& domain) {
        return plan_lines(parse_or_throw(text, parse_domain(domain)));
      },
      py::arg("text"), py::arg("domain"));

  m.def(
      "validate",
      [](const TaskInstance& task, const std::string& response, std::optional<std::size_t> optimal) {
        auto r = parse_response(response, task.domain());
        if (auto* err = std::get_if<ParseError>(&r)) {
          Verdict v;
          v.kind = VerdictKind::kParseError;
          v.parse_error = *err;
          v.optimal_length = optimal;
          return verdict_dict(v);
        }
        return verdict_dict(validate_plan(task, std::get<Plan>(r), optimal));
      },
      py::arg("task"), py::arg("response"), py::arg("optimal_length") = py::none());

  m.def(
      "graph_encoding",
      [](const TaskInstance& task, int pad) {
        auto e = encode_graph(task, pad);
        return std::vector<int>(e.values.begin(), e.values.end());
      },
      py::arg("task"), py::arg("pad_blocks"));

  m.def(
      "edit_distance",
      [](const TaskInstance& a, const TaskInstance& b) {
        auto enc = encode_corpus({a, b});
        return edit_distance(enc[0], enc[1]);
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "select_cmds",
      [](const std::vector<TaskInstance>& tasks, std::size_t k, std::uint64_t seed,
         const std::string& reduction, std::size_t dim) {
        SelectionConfig cfg;
        cfg.k = k;
        cfg.seed = seed;
        cfg.reduction = parse_reduction(reduction);
        cfg.dim = dim;
        py::gil_scoped_release release;
        return select_cmds(tasks, graph_embeddings(tasks), cfg);
      },
      py::arg("tasks"), py::arg("k"), py::arg("seed") = 0, py::arg("reduction") = "mds",
      py::arg("dim") = 2);

  m.def(
      "select_random",
      [](const std::vector<TaskInstance>& tasks, std::size_t k, std::uint64_t seed) {
        auto emb = graph_embeddings(tasks);
        return select_random(tasks, k, seed, &emb);
      },
      py::arg("tasks"), py::arg("k"), py::arg("seed") = 0);

  py::class_<SelectionResult>(m, "Selection")
      .def_readonly("method", &SelectionResult::method)
      .def_readonly("ids", &SelectionResult::selected_ids)
      .def_readonly("indices", &SelectionResult::selected_indices)
      .def_readonly("diversity", &SelectionResult::diversity)
      .def_readonly("cluster_sizes", &SelectionResult::cluster_sizes)
      .def("as_dict", &selection_dict);
}
