// Python bindings for the core operations: decompositions, certificates,
// generators, and the spectral kernels they build on.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hermblock/certify.hpp"
#include "hermblock/decompose.hpp"
#include "hermblock/generate.hpp"
#include "hermblock/linalg.hpp"

namespace py = pybind11;
using namespace hermblock;

namespace {

BlockMatrix as_block(const ComplexMatrix& m, Index beta, Index n) {
    return BlockMatrix::partition(HermitianMatrix(m), beta, n);
}

py::dict report_dict(const CertificateReport& r) {
    py::list items;
    for (const auto& it : r.items) {
        py::dict o;
        o["label"] = it.label;
        o["lhs"] = it.lhs;
        o["rhs"] = it.rhs;
        o["margin"] = it.margin;
        items.append(o);
    }
    py::dict out;
    out["name"] = r.name;
    out["tolerance"] = r.tolerance;
    out["passed"] = r.passed;
    out["items"] = items;
    out["context"] = r.context;
    return out;
}

py::dict decomposition_dict(const WeightedIsometryDecomposition& d) {
    py::dict out;
    out["target_dim"] = d.target_dim;
    out["weight"] = d.weight;
    out["copies"] = d.copies;
    out["summand"] = d.summand.mat();
    if (d.per_summand) {
        py::list per;
        for (const auto& s : *d.per_summand) {
            per.append(s.mat());
        }
        out["per_summand"] = per;
    }
    if (d.materialized()) {
        py::list isometries;
        for (const auto& v : d.isometries) {
            isometries.append(v.mat());
        }
        out["isometries"] = isometries;
    } else {
        py::list ops;
        for (const auto& v : d.structured) {
            ops.append(v);
        }
        out["structured_isometries"] = ops;
    }
    return out;
}

ConcaveFunctionSpec parse_f(const std::string& name, const std::vector<double>& params) {
    return ConcaveFunctionSpec::parse(name, params);
}

}  // namespace

PYBIND11_MODULE(_hermblock, m) {
    m.doc() = "Isometry decompositions and partial-trace certificates for positive "
              "matrices with Hermitian blocks";

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);
    py::register_exception<HypothesisViolation>(m, "HypothesisViolation",
                                                PyExc_RuntimeError);
    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

    py::class_<StructuredOperator>(m, "StructuredOperator")
        .def_property_readonly("rows", &StructuredOperator::rows)
        .def_property_readonly("cols", &StructuredOperator::cols)
        .def("apply", &StructuredOperator::apply, py::arg("x"))
        .def("apply_adjoint", &StructuredOperator::apply_adjoint, py::arg("x"))
        .def("materialize", &StructuredOperator::materialize);

    // Spectral kernels.
    m.def(
        "hermitian_eig",
        [](const ComplexMatrix& a) {
            const EigResult r = hermitian_eig(HermitianMatrix(a));
            return py::make_tuple(r.spectrum.values, r.vectors);
        },
        py::arg("a"), "Descending eigenvalues and the matching unitary");
    m.def(
        "psd_sqrt",
        [](const ComplexMatrix& a) { return psd_sqrt(HermitianMatrix(a)).mat(); },
        py::arg("a"));
    m.def(
        "polar_isometry_factor",
        [](const ComplexMatrix& c) {
            const PolarResult r = polar_isometry_factor(c);
            return py::make_tuple(r.isometry.mat(), r.psd_factor.mat());
        },
        py::arg("c"));
    m.def("schatten_norm", &schatten_norm, py::arg("a"), py::arg("p"));
    m.def(
        "ky_fan_norm",
        [](const ComplexMatrix& a, Index k) { return ky_fan_norm(a, k); },
        py::arg("a"), py::arg("k"));
    m.def(
        "matrix_function",
        [](const ComplexMatrix& a, const std::string& f, std::vector<double> params) {
            return matrix_function(HermitianMatrix(a), parse_f(f, params)).mat();
        },
        py::arg("a"), py::arg("f"), py::arg("params") = std::vector<double>{});
    m.def(
        "weyl_bound",
        [](const ComplexMatrix& y, const ComplexMatrix& z, Index r, Index s) {
            return report_dict(weyl_bound(HermitianMatrix(y), HermitianMatrix(z), r, s));
        },
        py::arg("y"), py::arg("z"), py::arg("r"), py::arg("s"));

    // Block model.
    m.def(
        "partial_trace",
        [](const ComplexMatrix& h, Index beta, Index n) {
            return partial_trace(as_block(h, beta, n)).mat();
        },
        py::arg("h"), py::arg("beta"), py::arg("n"));
    m.def(
        "hermitian_blocks",
        [](const ComplexMatrix& h, Index beta, Index n) {
            return as_block(h, beta, n).hermitian_blocks();
        },
        py::arg("h"), py::arg("beta"), py::arg("n"),
        "Whether every block is Hermitian within tolerance");
    m.def(
        "pad_to_dyadic",
        [](const ComplexMatrix& h, Index beta, Index n) {
            const BlockMatrix padded = pad_to_dyadic(as_block(h, beta, n));
            return py::make_tuple(padded.mat(), padded.beta());
        },
        py::arg("h"), py::arg("beta"), py::arg("n"));
    m.def(
        "eigen_index_map",
        [](const ComplexMatrix& a, Index m_copies, Index j) {
            return eigen_index_map(HermitianMatrix(a), m_copies, j);
        },
        py::arg("a"), py::arg("m"), py::arg("j"));
    m.def("tensor_product", &tensor_product, py::arg("a"), py::arg("b"));

    // Decompositions.
    m.def(
        "pinch_decompose",
        [](const ComplexMatrix& h, Index beta, Index n) {
            return decomposition_dict(pinch_decompose(as_block(h, beta, n)));
        },
        py::arg("h"), py::arg("beta"), py::arg("n"));
    m.def(
        "two_block_decompose",
        [](const ComplexMatrix& h, Index n) {
            return decomposition_dict(two_block_hermitian_decompose(as_block(h, 2, n)));
        },
        py::arg("h"), py::arg("n"));
    m.def(
        "clifford_decompose",
        [](const ComplexMatrix& h, Index beta, Index n, bool materialize) {
            return decomposition_dict(clifford_decompose(as_block(h, beta, n), materialize));
        },
        py::arg("h"), py::arg("beta"), py::arg("n"), py::arg("materialize") = true);
    m.def(
        "clifford_generator",
        [](int j, int beta) { return clifford_generator_dense(j, beta); },
        py::arg("j"), py::arg("beta"));
    m.def("hadamard_reflection", &hadamard_reflection, py::arg("p"));
    m.def(
        "clifford_omega",
        [](const ComplexMatrix& h, Index beta, Index n) {
            return clifford_omega(as_block(h, beta, n)).mat();
        },
        py::arg("h"), py::arg("beta"), py::arg("n"));

    // Certificates.
    m.def(
        "check_hiroshima",
        [](const ComplexMatrix& h, Index beta, Index n, bool force, double tol) {
            return report_dict(check_hiroshima(as_block(h, beta, n), force, tol));
        },
        py::arg("h"), py::arg("beta"), py::arg("n"), py::arg("force") = false,
        py::arg("tol") = tol_cert);
    m.def(
        "check_eigen_step",
        [](const ComplexMatrix& h, Index beta, Index n, bool force, double tol) {
            return report_dict(check_eigen_step(as_block(h, beta, n), force, tol));
        },
        py::arg("h"), py::arg("beta"), py::arg("n"), py::arg("force") = false,
        py::arg("tol") = tol_cert);
    m.def(
        "check_eigen_averaged",
        [](const ComplexMatrix& h, Index beta, Index n, Index k,
           const std::vector<Index>& splits, bool force, double tol) {
            return report_dict(
                check_eigen_averaged(as_block(h, beta, n), k, splits, force, tol));
        },
        py::arg("h"), py::arg("beta"), py::arg("n"), py::arg("k"), py::arg("splits"),
        py::arg("force") = false, py::arg("tol") = tol_cert);
    m.def(
        "check_rearrangement",
        [](const std::vector<ComplexMatrix>& members, const ComplexMatrix& t,
           const std::string& mode, bool force, double tol) {
            CommutingFamily family;
            for (const auto& s : members) {
                family.members.emplace_back(s);
            }
            return report_dict(check_rearrangement(
                family, HermitianMatrix(t),
                mode == "eigensteps" ? RearrangementMode::EigenSteps
                                     : RearrangementMode::Norms,
                force, tol));
        },
        py::arg("members"), py::arg("t"), py::arg("mode") = "norms",
        py::arg("force") = false, py::arg("tol") = tol_cert);
    m.def(
        "check_trace_concave",
        [](const ComplexMatrix& h, Index beta, Index n, const std::string& f,
           std::vector<double> params, bool force, double tol) {
            return report_dict(check_trace_concave(as_block(h, beta, n),
                                                   parse_f(f, params), force, tol));
        },
        py::arg("h"), py::arg("beta"), py::arg("n"), py::arg("f"),
        py::arg("params") = std::vector<double>{}, py::arg("force") = false,
        py::arg("tol") = tol_cert);
    m.def(
        "check_determinant",
        [](const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& x,
           bool force, double tol) {
            return report_dict(check_determinant(HermitianMatrix(a), HermitianMatrix(b),
                                                 HermitianMatrix(x), force, tol));
        },
        py::arg("a"), py::arg("b"), py::arg("x"), py::arg("force") = false,
        py::arg("tol") = tol_cert);
    m.def(
        "check_nielsen_kempe",
        [](const std::vector<std::pair<RealMatrix, ComplexMatrix>>& terms,
           bool normalized, bool force, double tol) {
            SeparableState z;
            z.normalized = normalized;
            for (const auto& [a, b] : terms) {
                z.terms.push_back({a, b});
            }
            return report_dict(check_nielsen_kempe(z, force, tol));
        },
        py::arg("terms"), py::arg("normalized") = false, py::arg("force") = false,
        py::arg("tol") = tol_cert);
    m.def(
        "check_block_norm_bound",
        [](const ComplexMatrix& h, Index n, double p, double tol) {
            return report_dict(check_block_norm_bound(as_block(h, 2, n), p, tol));
        },
        py::arg("h"), py::arg("n"), py::arg("p"), py::arg("tol") = tol_cert);

    // Generators and the counterexample search.
    m.def(
        "generate_block",
        [](const std::string& method, std::uint64_t seed, Index beta, Index n,
           Index terms, Index iteration_cap) {
            GeneratorConfig cfg;
            cfg.method = method;
            cfg.seed = seed;
            cfg.beta = beta;
            cfg.n = n;
            cfg.terms = terms;
            cfg.iteration_cap = iteration_cap;
            return gen_hermitian_block_psd(cfg).mat();
        },
        py::arg("method"), py::arg("seed"), py::arg("beta"), py::arg("n"),
        py::arg("terms") = 2, py::arg("iteration_cap") = 500);
    m.def(
        "generate_commuting_family",
        [](std::uint64_t seed, Index alpha, Index n) {
            GeneratorConfig cfg;
            cfg.seed = seed;
            cfg.beta = alpha;
            cfg.n = n;
            std::vector<ComplexMatrix> out;
            for (const auto& s : gen_commuting_family(cfg).members) {
                out.push_back(s.mat());
            }
            return out;
        },
        py::arg("seed"), py::arg("alpha"), py::arg("n"));
    m.def(
        "generate_separable_state",
        [](std::uint64_t seed, Index terms, Index n_h, Index n_f, bool normalized) {
            GeneratorConfig cfg;
            cfg.seed = seed;
            cfg.terms = terms;
            cfg.n_h = n_h;
            cfg.n_f = n_f;
            cfg.normalized = normalized;
            std::vector<std::pair<RealMatrix, ComplexMatrix>> out;
            for (const auto& term : gen_separable_real_factor(cfg).terms) {
                out.emplace_back(term.a, term.b);
            }
            return out;
        },
        py::arg("seed"), py::arg("terms"), py::arg("n_h"), py::arg("n_f"),
        py::arg("normalized") = false);
    m.def(
        "norm_gap_margin",
        [](const ComplexMatrix& h, Index n) {
            return norm_gap_margin(as_block(h, 2, n));
        },
        py::arg("h"), py::arg("n"));
    m.def(
        "search_counterexample",
        [](long budget, std::uint64_t seed, bool hermitian_restricted) {
            GeneratorConfig cfg;
            cfg.budget = budget;
            cfg.seed = seed;
            const CounterexampleSearchResult r =
                search_counterexample_normal_blocks(cfg, hermitian_restricted);
            py::dict out;
            out["best_margin"] = r.best_margin;
            out["evaluated"] = r.evaluated;
            if (r.instance) {
                out["instance"] = r.instance->mat();
            }
            return out;
        },
        py::arg("budget"), py::arg("seed") = 0, py::arg("hermitian_restricted") = false);

    m.attr("TOL_EIG") = tol_eig;
    m.attr("TOL_ISO") = tol_iso;
    m.attr("TOL_CERT") = tol_cert;
    m.attr("__version__") = "0.1.0";
}
