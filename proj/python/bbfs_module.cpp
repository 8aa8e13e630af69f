// Python bindings for the synthesis engine. Formulas cross the boundary as
// immutable handles; schedules as (k, seconds) tuples; everything heavy stays
// in the C++ core.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "bbfs/cegis.hpp"
#include "bbfs/cli.hpp"
#include "bbfs/cnf.hpp"
#include "bbfs/errors.hpp"
#include "bbfs/extract.hpp"
#include "bbfs/formula.hpp"
#include "bbfs/gcln.hpp"
#include "bbfs/sampling.hpp"
#include "bbfs/sat.hpp"

namespace py = pybind11;
using namespace bbfs;

namespace {

// FormulaPtr aliases shared_ptr<const Formula>, which pybind11 cannot use as
// a holder, so formulas are exposed through a small value-type handle.
struct FormulaHandle {
    FormulaPtr ptr;
};

FormulaHandle wrap(FormulaPtr f) { return FormulaHandle{std::move(f)}; }

std::vector<ScheduleEntry> to_schedule(const std::vector<std::pair<int, double>>& entries) {
    std::vector<ScheduleEntry> out;
    out.reserve(entries.size());
    for (const auto& [k, secs] : entries)
        out.push_back({k, secs});
    return out;
}

std::vector<std::pair<int, double>> from_schedule(const std::vector<ScheduleEntry>& entries) {
    std::vector<std::pair<int, double>> out;
    out.reserve(entries.size());
    for (const auto& e : entries)
        out.emplace_back(e.k, e.timeout);
    return out;
}

} // namespace

PYBIND11_MODULE(_bbfs, m) {
    m.doc() = "bounded boolean functional synthesis";

    // Exceptions mirror the C++ hierarchy under a common base.
    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<UnrealizableSpecError>(m, "UnrealizableSpecError", base);
    py::register_exception<DomainTooLargeError>(m, "DomainTooLargeError", base);
    py::register_exception<EmptyTableError>(m, "EmptyTableError", base);
    py::register_exception<ConflictLimitError>(m, "ConflictLimitError", base);

    py::enum_<Arch>(m, "Arch")
        .value("CNF", Arch::CNF)
        .value("DNF", Arch::DNF);

    py::class_<FormulaHandle>(m, "Formula")
        .def("__str__", [](const FormulaHandle& h) { return print_formula(h.ptr); })
        .def("__repr__",
             [](const FormulaHandle& h) { return "Formula(" + print_formula(h.ptr) + ")"; });

    py::class_<BfsSpec>(m, "Spec")
        .def_property_readonly("inputs", &BfsSpec::input_names)
        .def_property_readonly("outputs", &BfsSpec::output_names)
        .def_property_readonly("formula", [](const BfsSpec& s) { return wrap(s.spec); })
        .def("__repr__", [](const BfsSpec& s) {
            std::ostringstream ss;
            ss << "Spec(inputs=" << s.inputs.size() << ", outputs=" << s.outputs.size() << ")";
            return ss.str();
        });

    py::class_<SampleTable>(m, "SampleTable")
        .def_readonly("columns", &SampleTable::columns)
        .def_readonly("n_inputs", &SampleTable::n_inputs)
        .def_readonly("rows", &SampleTable::rows)
        .def("__len__", [](const SampleTable& t) { return t.rows.size(); });

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("l1_lambda", &TrainConfig::l1_lambda)
        .def_readwrite("decision_threshold", &TrainConfig::decision_threshold)
        .def_readwrite("max_wall_time", &TrainConfig::max_wall_time)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("init_noise", &TrainConfig::init_noise)
        .def_readwrite("gate_saturation_tol", &TrainConfig::gate_saturation_tol);

    py::class_<GclnParams>(m, "GclnParams")
        .def_readonly("arch", &GclnParams::arch)
        .def_readonly("n_inputs", &GclnParams::n_inputs)
        .def_readonly("k", &GclnParams::k)
        .def_readonly("literal_gates", &GclnParams::literal_gates)
        .def_readonly("clause_gates", &GclnParams::clause_gates);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("params", &TrainResult::params)
        .def_readonly("epochs", &TrainResult::epochs)
        .def_readonly("final_accuracy", &TrainResult::final_accuracy)
        .def_readonly("converged", &TrainResult::converged)
        .def_readonly("elapsed", &TrainResult::elapsed);

    py::class_<SkolemMetrics>(m, "SkolemMetrics")
        .def_readonly("clauses", &SkolemMetrics::clauses)
        .def_readonly("literals", &SkolemMetrics::literals)
        .def_readonly("unique_inputs", &SkolemMetrics::unique_inputs)
        .def("__repr__", [](const SkolemMetrics& sm) {
            std::ostringstream ss;
            ss << "SkolemMetrics(clauses=" << sm.clauses << ", literals=" << sm.literals
               << ", unique_inputs=" << sm.unique_inputs << ")";
            return ss.str();
        });

    py::class_<SkolemVector>(m, "Skolem")
        .def_readonly("output_names", &SkolemVector::output_names)
        .def_readonly("arch", &SkolemVector::arch)
        .def_property_readonly("formulas",
                               [](const SkolemVector& sv) {
                                   std::vector<FormulaHandle> out;
                                   for (const auto& f : sv.formulas)
                                       out.push_back(wrap(f));
                                   return out;
                               })
        .def("__str__", [](const SkolemVector& sv) { return print_skolem(sv); });

    py::class_<Counterexample>(m, "Counterexample")
        .def_readonly("x", &Counterexample::x_star)
        .def_readonly("y_witness", &Counterexample::y_witness);

    py::class_<VerifyOutcome>(m, "VerifyOutcome")
        .def_property_readonly("valid", &VerifyOutcome::valid)
        .def_readonly("counterexample", &VerifyOutcome::counterexample)
        .def("__bool__", &VerifyOutcome::valid)
        .def("__repr__", [](const VerifyOutcome& v) {
            return std::string("VerifyOutcome(") + (v.valid() ? "Valid" : "Invalid") + ")";
        });

    py::class_<SynthesisReport>(m, "SynthesisReport")
        .def_property_readonly("status",
                               [](const SynthesisReport& r) {
                                   return r.status == SynthStatus::Solved ? "Solved" : "Exhausted";
                               })
        .def_property_readonly("solved",
                               [](const SynthesisReport& r) {
                                   return r.status == SynthStatus::Solved;
                               })
        .def_readonly("skolem", &SynthesisReport::skolem)
        .def_readonly("k", &SynthesisReport::k_used)
        .def_readonly("wall_time", &SynthesisReport::wall_time)
        .def_readonly("iterations", &SynthesisReport::cegis_iterations)
        .def_readonly("metrics", &SynthesisReport::metrics)
        .def("__repr__", [](const SynthesisReport& r) {
            std::ostringstream ss;
            ss << "SynthesisReport(status="
               << (r.status == SynthStatus::Solved ? "Solved" : "Exhausted")
               << ", k=" << r.k_used << ")";
            return ss.str();
        });

    // Formula layer.
    m.def("parse_spec", &parse_spec, py::arg("text"),
          "Parse the .bfs text format into a Spec.");
    m.def(
        "parse_formula",
        [](const std::string& text, const std::vector<std::string>& known) {
            return wrap(parse_sexpr(text, {known.begin(), known.end()}));
        },
        py::arg("text"), py::arg("variables"),
        "Parse one s-expression over the given variable names.");
    m.def(
        "eval_formula",
        [](const FormulaHandle& f, const VarAssignment& assignment) {
            return eval(f.ptr, assignment);
        },
        py::arg("formula"), py::arg("assignment"),
        "Evaluate a formula under a {name: bool} assignment.");
    m.def(
        "variables",
        [](const FormulaHandle& f) {
            std::set<std::string> vars = collect_vars(f.ptr);
            return std::vector<std::string>(vars.begin(), vars.end());
        },
        py::arg("formula"), "Names referenced by the formula, sorted.");

    // Sampling layer.
    m.def("build_table", &build_table, py::arg("spec"), py::arg("n"), py::arg("seed") = 0,
          "Sample up to n functionally consistent rows satisfying the spec.");

    // Training layer.
    m.def("train", &train, py::arg("table"), py::arg("output_index"), py::arg("k"),
          py::arg("arch") = Arch::CNF, py::arg("config") = TrainConfig{},
          "Fit one gated network to an output column of the table.");
    m.def("train_all_outputs", &train_all_outputs, py::arg("table"), py::arg("k"),
          py::arg("arch") = Arch::CNF, py::arg("config") = TrainConfig{},
          "Fit one network per output column.");

    // Extraction layer.
    m.def(
        "fextract",
        [](const GclnParams& params, const std::vector<std::string>& input_names,
           double threshold) { return wrap(fextract(params, input_names, threshold)); },
        py::arg("params"), py::arg("input_names"), py::arg("threshold") = 0.5,
        "Threshold trained gates into a normal-form formula.");
    m.def(
        "simplify", [](const FormulaHandle& f) { return wrap(simplify(f.ptr)); },
        py::arg("formula"), "Normal-form cleanup; preserves semantics, never grows.");
    m.def("metrics", &metrics, py::arg("skolem"), "Clause/literal/input counts.");
    m.def("print_skolem", &print_skolem, py::arg("skolem"));
    m.def("parse_skolem", &parse_skolem, py::arg("text"), py::arg("spec"));

    // Verification and synthesis layer.
    m.def("verify", &verify, py::arg("spec"), py::arg("skolem"),
          "Solver-backed validity check; counterexample on failure.");
    m.def("exhaustive_verify", &exhaustive_verify, py::arg("spec"), py::arg("skolem"),
          "Independent check enumerating the full input space (|inputs| <= 16).");
    m.def("default_schedule", [] { return from_schedule(default_schedule()); },
          "The default (k, seconds) ladder.");
    m.def(
        "synthesize",
        [](const BfsSpec& spec, std::optional<std::vector<std::pair<int, double>>> schedule,
           Arch arch, uint64_t seed, size_t samples) {
            CegisConfig cfg;
            cfg.arch = arch;
            cfg.seed = seed;
            cfg.samples = samples;
            std::vector<ScheduleEntry> sched =
                schedule ? to_schedule(*schedule) : default_schedule();
            return run_schedule(spec, sched, cfg);
        },
        py::arg("spec"), py::arg("schedule") = std::nullopt, py::arg("arch") = Arch::CNF,
        py::arg("seed") = 0, py::arg("samples") = 500,
        "Run the synthesis loop over a (k, seconds) schedule.");
    m.def(
        "repair_check",
        [](const FormulaHandle& h, const BfsSpec& spec, const SkolemVector& sv) {
            return repair_check(h.ptr, spec, sv);
        },
        py::arg("h"), py::arg("spec"), py::arg("skolem"),
        "True iff the candidate vector works for every completion of h.");
}
