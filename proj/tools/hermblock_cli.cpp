// Command-line front end: decompositions, inequality certificates, instance
// generators, and the counterexample search, with JSON reports suitable for
// scripting.
//
// Exit codes: 0 success/pass, 1 verified violation, 2 invalid input,
// 3 resource-cap refusal, 4 hypothesis violated without --force.

#include "hermblock/certify.hpp"
#include "hermblock/decompose.hpp"
#include "hermblock/generate.hpp"
#include "hermblock/io.hpp"
#include "hermblock/rng.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace hermblock;

constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_invalid = 2;
constexpr int exit_resource = 3;
constexpr int exit_hypothesis = 4;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

BlockMatrix load_block(const std::string& path, Index beta_flag, Index n_flag) {
    const Json j = read_json_file(path);
    if (j.contains("matrix")) {
        return block_from_json(j);
    }
    if (beta_flag <= 0 || n_flag <= 0) {
        throw InvalidInput(path +
                           ": plain matrix input needs --beta and --n to fix the "
                           "block partition");
    }
    return BlockMatrix::partition(HermitianMatrix(matrix_from_json(j)), beta_flag,
                                  n_flag);
}

Json input_digest_entry(const std::string& path) {
    Json o;
    o["path"] = path;
    o["digest"] = json_digest(read_json_file(path));
    return o;
}

void print_report(const CertificateReport& report) {
    std::cout << report.name << ": " << (report.passed ? "PASS" : "VIOLATION")
              << " (tolerance " << report.tolerance << ", " << report.context << ")\n";
    for (const auto& item : report.items) {
        std::cout << "  " << item.label << ": lhs " << item.lhs << "  rhs " << item.rhs
                  << "  margin " << item.margin << "\n";
    }
}

struct DecomposeSummary {
    double residual = 0.0;
    double max_defect = 0.0;
    std::vector<double> defects;
    bool probe_based = false;
};

// Residuals must come from the emitted artifact, so parse the serialized
// decomposition back and measure against the freshly loaded target.
DecomposeSummary summarize_emitted(const Json& emitted, const BlockMatrix& input,
                                   const std::string& kind) {
    const WeightedIsometryDecomposition parsed = decomposition_from_json(emitted);
    DecomposeSummary out;
    if (parsed.materialized()) {
        ComplexMatrix target;
        if (kind == "clifford") {
            target = direct_sum_copies(input.carrier(), parsed.copies).mat();
        } else {
            target = input.mat();
        }
        out.residual = parsed.reconstruction_residual(target);
        for (const auto& v : parsed.isometries) {
            out.defects.push_back(v.defect());
        }
        out.max_defect = parsed.max_isometry_defect();
        return out;
    }
    out.probe_based = true;
    Rng rng(0x9e3779b97f4a7c15ULL);
    const StructuredOperator big = direct_sum_operator(input.carrier(), parsed.copies);
    for (int probe = 0; probe < 8; ++probe) {
        Eigen::VectorXcd v(parsed.target_dim);
        for (Index i = 0; i < v.size(); ++i) {
            v(i) = Complex(rng.normal(), rng.normal());
        }
        const Complex lhs = v.dot(big.apply(v));
        const Complex rhs = parsed.structured_quadratic_form(v);
        out.residual = std::max(out.residual, std::abs(lhs - rhs) / v.squaredNorm());
        for (const auto& op : parsed.structured) {
            Eigen::VectorXcd w(op.cols());
            for (Index i = 0; i < w.size(); ++i) {
                w(i) = Complex(rng.normal(), rng.normal());
            }
            const Eigen::VectorXcd round = op.apply_adjoint(op.apply(w));
            out.max_defect = std::max(out.max_defect, (round - w).norm() / w.norm());
        }
    }
    return out;
}

int run_decompose(const std::string& kind, const std::string& input_path,
                  Index beta_flag, Index n_flag, bool pad, bool structured,
                  const std::string& out_path, const std::string& report_path,
                  double tol) {
    Timer timer;
    BlockMatrix input = load_block(input_path, beta_flag, n_flag);
    if (pad) {
        input = pad_to_dyadic(input);
    }

    WeightedIsometryDecomposition decomposition =
        kind == "pinch"       ? pinch_decompose(input)
        : kind == "two-block" ? two_block_hermitian_decompose(input)
                              : clifford_decompose(input, !structured);

    Json emitted = decomposition_to_json(decomposition, kind);
    if (!out_path.empty()) {
        write_json_file(out_path, emitted);
        emitted = read_json_file(out_path);
    } else {
        emitted = Json::parse(emitted.dump());
    }
    const DecomposeSummary summary = summarize_emitted(emitted, input, kind);

    Json report;
    report["command"] = "decompose " + kind;
    report["tolerance"] = tol;
    report["inputs"] = Json::array({input_digest_entry(input_path)});
    Json d;
    d["kind"] = kind;
    d["weight"] = decomposition.weight;
    d["m"] = decomposition.copies;
    d["isometries"] = decomposition.materialized()
                          ? decomposition.isometries.size()
                          : decomposition.structured.size();
    d[summary.probe_based ? "probe_residual" : "reconstruction_residual"] =
        summary.residual;
    d[summary.probe_based ? "probe_isometry_defect" : "max_isometry_defect"] =
        summary.max_defect;
    if (!summary.defects.empty()) {
        d["isometry_defects"] = summary.defects;
    }
    report["decomposition"] = std::move(d);
    report["wall_ms"] = timer.ms();

    std::cout << "decompose " << kind << ": weight " << decomposition.weight
              << ", copies " << decomposition.copies << ", residual "
              << summary.residual << (summary.probe_based ? " (probe)" : "")
              << ", max isometry defect " << summary.max_defect << ", tolerance "
              << tol << ", " << timer.ms() << " ms\n";
    if (!out_path.empty()) {
        std::cout << "wrote " << out_path << "\n";
    }
    if (!report_path.empty()) {
        write_json_file(report_path, report);
    }
    return exit_ok;
}

struct VerifyTask {
    std::string path;
    CertificateReport report;
};

std::vector<Index> parse_splits(const std::string& csv) {
    std::vector<Index> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(static_cast<Index>(std::stoll(item)));
        }
    }
    return out;
}

int run_verify(const std::string& check, const std::vector<std::string>& inputs,
               const std::string& a_path, const std::string& b_path,
               const std::string& x_path, bool force, double tol,
               const std::string& f_name, const std::vector<double>& f_params,
               double p, Index k, const std::string& splits_csv,
               const std::string& mode, Index beta_flag, Index n_flag, int jobs,
               const std::string& json_path) {
    Timer timer;
    std::vector<CertificateReport> reports;

    auto run_one = [&](const std::string& path) -> CertificateReport {
        if (check == "hiroshima") {
            return check_hiroshima(load_block(path, beta_flag, n_flag), force, tol);
        }
        if (check == "eigen-step") {
            return check_eigen_step(load_block(path, beta_flag, n_flag), force, tol);
        }
        if (check == "eigen-avg") {
            const BlockMatrix h = load_block(path, beta_flag, n_flag);
            std::vector<Index> splits = parse_splits(splits_csv);
            if (splits.empty()) {
                splits.assign(static_cast<std::size_t>(smallest_dyadic_at_least(h.beta())),
                              k);
            }
            return check_eigen_averaged(h, k, splits, force, tol);
        }
        if (check == "rearrange") {
            const Json j = read_json_file(path);
            const CommutingFamily family = family_from_json(j);
            if (!j.contains("t")) {
                throw InvalidInput(path + ": rearrange input needs a 't' matrix");
            }
            const HermitianMatrix t(matrix_from_json(j.at("t")));
            const RearrangementMode m = mode == "eigensteps"
                                            ? RearrangementMode::EigenSteps
                                            : RearrangementMode::Norms;
            return check_rearrangement(family, t, m, force, tol);
        }
        if (check == "trace-concave") {
            return check_trace_concave(load_block(path, beta_flag, n_flag),
                                       ConcaveFunctionSpec::parse(f_name, f_params),
                                       force, tol);
        }
        if (check == "nielsen-kempe") {
            return check_nielsen_kempe(state_from_json(read_json_file(path)), force,
                                       tol);
        }
        if (check == "norm-bound") {
            return check_block_norm_bound(load_block(path, beta_flag, n_flag), p, tol);
        }
        throw InvalidInput("unknown check '" + check + "'");
    };

    if (check == "determinant") {
        if (a_path.empty() || b_path.empty() || x_path.empty()) {
            throw InvalidInput("verify determinant needs --a, --b and --x");
        }
        reports.push_back(check_determinant(
            HermitianMatrix(matrix_from_json(read_json_file(a_path))),
            HermitianMatrix(matrix_from_json(read_json_file(b_path))),
            HermitianMatrix(matrix_from_json(read_json_file(x_path))), force, tol));
    } else {
        if (inputs.empty()) {
            throw InvalidInput("verify " + check + " needs at least one input file");
        }
        if (jobs > 1 && inputs.size() > 1) {
            std::vector<std::future<CertificateReport>> futures;
            futures.reserve(inputs.size());
            for (const auto& path : inputs) {
                futures.push_back(
                    std::async(std::launch::async, [&run_one, path] { return run_one(path); }));
            }
            for (auto& f : futures) {
                reports.push_back(f.get());
            }
        } else {
            for (const auto& path : inputs) {
                reports.push_back(run_one(path));
            }
        }
    }

    bool all_passed = true;
    Json json_reports = Json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (!inputs.empty() && inputs.size() > 1) {
            std::cout << inputs[i] << ":\n";
        }
        print_report(reports[i]);
        json_reports.push_back(report_to_json(reports[i]));
        all_passed = all_passed && reports[i].passed;
    }
    std::cout << "wall time " << timer.ms() << " ms\n";

    if (!json_path.empty()) {
        Json out;
        out["command"] = "verify " + check;
        Json in = Json::array();
        for (const auto& path : inputs) {
            in.push_back(input_digest_entry(path));
        }
        if (check == "determinant") {
            in.push_back(input_digest_entry(a_path));
            in.push_back(input_digest_entry(b_path));
            in.push_back(input_digest_entry(x_path));
        }
        out["inputs"] = std::move(in);
        out["reports"] = std::move(json_reports);
        out["wall_ms"] = timer.ms();
        write_json_file(json_path, out);
    }
    return all_passed ? exit_ok : exit_violation;
}

int run_generate(GeneratorConfig cfg, const std::string& config_path,
                 const std::string& out_path) {
    if (!config_path.empty()) {
        cfg = config_from_json(read_json_file(config_path));
    }
    Json payload;
    if (cfg.method == "commuting") {
        payload = family_to_json(gen_commuting_family(cfg));
    } else if (cfg.method == "state") {
        payload = state_to_json(gen_separable_real_factor(cfg));
    } else {
        payload = block_to_json(gen_hermitian_block_psd(cfg));
    }
    payload["provenance"] = config_to_json(cfg);
    if (out_path.empty()) {
        std::cout << payload.dump(2) << "\n";
    } else {
        write_json_file(out_path, payload);
        std::cout << "wrote " << out_path << " (digest " << json_digest(payload)
                  << ")\n";
    }
    return exit_ok;
}

int run_search(GeneratorConfig cfg, bool self_test, bool hermitian_x,
               const std::string& out_path) {
    Timer timer;
    if (self_test) {
        // Rank-one [[1,0,0,1]] outer product: the operator norm doubles the
        // partial-trace norm, so the evaluator must report +1.
        ComplexMatrix h = ComplexMatrix::Zero(4, 4);
        h(0, 0) = h(0, 3) = h(3, 0) = h(3, 3) = 1.0;
        const double margin =
            norm_gap_margin(BlockMatrix::partition(HermitianMatrix(h), 2, 2));
        std::cout << "evaluator self-test margin " << margin << "\n";
    }
    if (cfg.budget <= 0) {
        std::cout << "no candidate evaluated (budget 0)\n";
        return exit_ok;
    }
    const CounterexampleSearchResult result =
        search_counterexample_normal_blocks(cfg, hermitian_x);
    std::cout << "search: evaluated " << result.evaluated << ", best margin "
              << result.best_margin << ", " << timer.ms() << " ms\n";
    if (result.instance) {
        std::cout << "found a norm-gap instance with normal off-diagonal block\n";
        if (!out_path.empty()) {
            Json payload = block_to_json(*result.instance);
            payload["margin"] = result.best_margin;
            write_json_file(out_path, payload);
            std::cout << "wrote " << out_path << "\n";
        }
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isometry decompositions and partial-trace certificates for "
                 "positive matrices with Hermitian blocks"};
    app.set_version_flag("--version", "hermblock 0.1.0");
    app.require_subcommand(1);

    // decompose
    auto* dec = app.add_subcommand("decompose", "Run one of the decompositions");
    std::string dec_kind;
    std::string dec_input;
    std::string dec_out;
    std::string dec_report;
    Index dec_beta = 0;
    Index dec_n = 0;
    bool dec_pad = false;
    bool dec_structured = false;
    dec->add_option("kind", dec_kind, "pinch | two-block | clifford")
        ->required()
        ->check(CLI::IsMember({"pinch", "two-block", "clifford"}));
    dec->add_option("--input", dec_input, "matrix file (block form or plain)")
        ->required();
    dec->add_option("--beta", dec_beta, "block count for plain matrix input");
    dec->add_option("--n", dec_n, "block side for plain matrix input");
    dec->add_flag("--pad", dec_pad, "pad to the next dyadic block count first");
    dec->add_flag("--structured", dec_structured,
                  "emit lazy structured isometries (clifford)");
    dec->add_option("--out", dec_out, "decomposition output file");
    dec->add_option("--report", dec_report, "run report output file");
    double dec_tol = tol_cert;
    dec->add_option("--tol", dec_tol, "tolerance echoed in the report");

    // verify
    auto* ver = app.add_subcommand("verify", "Certify one of the inequalities");
    std::string ver_check;
    std::vector<std::string> ver_inputs;
    std::string ver_a, ver_b, ver_x, ver_mode = "norms", ver_splits, ver_json;
    std::string ver_f = "sqrt";
    std::vector<double> ver_f_params;
    double ver_p = 2.0;
    double ver_tol = tol_cert;
    Index ver_k = 0;
    Index ver_beta = 0, ver_n = 0;
    int ver_jobs = 1;
    bool ver_force = false;
    ver->add_option("check", ver_check,
                    "hiroshima | eigen-step | eigen-avg | rearrange | trace-concave | "
                    "determinant | nielsen-kempe | norm-bound")
        ->required()
        ->check(CLI::IsMember({"hiroshima", "eigen-step", "eigen-avg", "rearrange",
                               "trace-concave", "determinant", "nielsen-kempe",
                               "norm-bound"}));
    ver->add_option("inputs", ver_inputs, "input files");
    ver->add_option("--a", ver_a, "A matrix file (determinant)");
    ver->add_option("--b", ver_b, "B matrix file (determinant)");
    ver->add_option("--x", ver_x, "X matrix file (determinant)");
    ver->add_flag("--force", ver_force, "run even when a hypothesis fails");
    ver->add_option("--tol", ver_tol, "margin tolerance override");
    ver->add_option("--f", ver_f, "concave function name (trace-concave)");
    ver->add_option("--f-params", ver_f_params, "concave function parameters");
    ver->add_option("--p", ver_p, "Schatten exponent (norm-bound)");
    ver->add_option("--k", ver_k, "eigenvalue step index (eigen-avg)");
    ver->add_option("--splits", ver_splits, "comma list k_1,...,k_beta (eigen-avg)");
    ver->add_option("--mode", ver_mode, "rearrange mode: norms | eigensteps")
        ->check(CLI::IsMember({"norms", "eigensteps"}));
    ver->add_option("--beta", ver_beta, "block count for plain matrix input");
    ver->add_option("--n", ver_n, "block side for plain matrix input");
    ver->add_option("--jobs", ver_jobs, "parallel workers for batch verification");
    ver->add_option("--json", ver_json, "write the run report here");

    // generate
    auto* gen = app.add_subcommand("generate", "Emit a seeded instance");
    GeneratorConfig gen_cfg;
    std::string gen_config_path;
    std::string gen_out;
    gen->add_option("--method", gen_cfg.method,
                    "separable | gram | projected | commuting | state");
    gen->add_option("--seed", gen_cfg.seed, "64-bit seed");
    gen->add_option("--beta", gen_cfg.beta, "block count / family size");
    gen->add_option("--n", gen_cfg.n, "block side");
    gen->add_option("--terms", gen_cfg.terms, "tensor terms");
    gen->add_option("--cap", gen_cfg.iteration_cap, "projection iteration cap");
    gen->add_option("--n-h", gen_cfg.n_h, "state first-factor dimension");
    gen->add_option("--n-f", gen_cfg.n_f, "state second-factor dimension");
    gen->add_flag("--normalized", gen_cfg.normalized, "scale the state to trace one");
    gen->add_option("--config", gen_config_path, "GeneratorConfig JSON file");
    gen->add_option("--out", gen_out, "output file");
    double gen_tol = tol_cert;
    gen->add_option("--tol", gen_tol, "tolerance echoed in the provenance");

    // search
    auto* sea = app.add_subcommand(
        "search", "Randomized hunt for a normal-off-diagonal norm-gap instance");
    GeneratorConfig sea_cfg;
    std::string sea_out;
    bool sea_self_test = false;
    bool sea_hermitian = false;
    sea->add_option("--budget", sea_cfg.budget, "candidate evaluations")->required();
    sea->add_option("--seed", sea_cfg.seed, "64-bit seed");
    sea->add_option("--out", sea_out, "instance output file if found");
    sea->add_flag("--self-test", sea_self_test, "replay the rank-one margin check");
    sea->add_flag("--hermitian-x", sea_hermitian, "restrict to Hermitian X");
    double sea_tol = tol_cert;
    sea->add_option("--tol", sea_tol, "tolerance echoed in the output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dec->parsed()) {
            return run_decompose(dec_kind, dec_input, dec_beta, dec_n, dec_pad,
                                 dec_structured, dec_out, dec_report, dec_tol);
        }
        if (ver->parsed()) {
            return run_verify(ver_check, ver_inputs, ver_a, ver_b, ver_x, ver_force,
                              ver_tol, ver_f, ver_f_params, ver_p, ver_k, ver_splits,
                              ver_mode, ver_beta, ver_n, ver_jobs, ver_json);
        }
        if (gen->parsed()) {
            return run_generate(gen_cfg, gen_config_path, gen_out);
        }
        if (sea->parsed()) {
            return run_search(sea_cfg, sea_self_test, sea_hermitian, sea_out);
        }
    } catch (const HypothesisViolation& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return exit_hypothesis;
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return exit_resource;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return exit_invalid;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    return exit_invalid;
}
