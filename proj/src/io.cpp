#include "hermblock/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace hermblock {

namespace {

double finite_number(const Json& j, const char* where) {
    if (!j.is_number()) {
        throw InvalidInput(std::string(where) + ": expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw InvalidInput(std::string(where) + ": numbers must be finite");
    }
    return v;
}

const Json& field(const Json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) {
        throw InvalidInput(std::string(where) + ": missing field '" + key + "'");
    }
    return j.at(key);
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
    Json data = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            data.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        }
    }
    Json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["data"] = std::move(data);
    return out;
}

ComplexMatrix matrix_from_json(const Json& j) {
    const auto rows = field(j, "rows", "matrix").get<Index>();
    const auto cols = field(j, "cols", "matrix").get<Index>();
    const Json& data = field(j, "data", "matrix");
    if (rows < 0 || cols < 0 || !data.is_array() ||
        static_cast<Index>(data.size()) != rows * cols) {
        throw InvalidInput("matrix: data length must equal rows*cols");
    }
    ComplexMatrix m(rows, cols);
    Index at = 0;
    for (const auto& entry : data) {
        if (!entry.is_array() || entry.size() != 2) {
            throw InvalidInput("matrix: entries must be [re, im] pairs");
        }
        const double re = finite_number(entry[0], "matrix entry");
        const double im = finite_number(entry[1], "matrix entry");
        m(at / cols, at % cols) = Complex(re, im);
        ++at;
    }
    return m;
}

Json block_to_json(const BlockMatrix& h) {
    Json out;
    out["beta"] = h.beta();
    out["n"] = h.n();
    out["matrix"] = matrix_to_json(h.mat());
    return out;
}

BlockMatrix block_from_json(const Json& j) {
    const auto beta = field(j, "beta", "block matrix").get<Index>();
    const auto n = field(j, "n", "block matrix").get<Index>();
    const ComplexMatrix m = matrix_from_json(field(j, "matrix", "block matrix"));
    if (m.rows() != m.cols() || m.rows() != beta * n) {
        throw InvalidInput("block matrix: requires rows = cols = beta*n");
    }
    return BlockMatrix::partition(HermitianMatrix(m), beta, n);
}

Json spectrum_to_json(const Spectrum& s) {
    return Json(s.values);
}

Json report_to_json(const CertificateReport& r) {
    Json items = Json::array();
    for (const auto& it : r.items) {
        Json o;
        o["label"] = it.label;
        o["lhs"] = it.lhs;
        o["rhs"] = it.rhs;
        o["margin"] = it.margin;
        items.push_back(std::move(o));
    }
    Json out;
    out["name"] = r.name;
    out["tolerance"] = r.tolerance;
    out["passed"] = r.passed;
    out["items"] = std::move(items);
    out["context"] = r.context;
    return out;
}

Json family_to_json(const CommutingFamily& f) {
    Json members = Json::array();
    for (const auto& m : f.members) {
        members.push_back(matrix_to_json(m.mat()));
    }
    Json out;
    out["members"] = std::move(members);
    if (f.witness_basis) {
        out["witness_basis"] = matrix_to_json(*f.witness_basis);
    }
    return out;
}

CommutingFamily family_from_json(const Json& j) {
    CommutingFamily f;
    for (const auto& m : field(j, "members", "family")) {
        f.members.emplace_back(matrix_from_json(m));
    }
    if (j.contains("witness_basis")) {
        f.witness_basis = matrix_from_json(j.at("witness_basis"));
    }
    if (f.members.empty()) {
        throw InvalidInput("family: needs at least one member");
    }
    return f;
}

Json state_to_json(const SeparableState& z) {
    Json terms = Json::array();
    for (const auto& term : z.terms) {
        Json o;
        o["a"] = matrix_to_json(term.a.cast<Complex>());
        o["b"] = matrix_to_json(term.b);
        terms.push_back(std::move(o));
    }
    Json out;
    out["terms"] = std::move(terms);
    out["normalized"] = z.normalized;
    return out;
}

SeparableState state_from_json(const Json& j) {
    SeparableState z;
    for (const auto& t : field(j, "terms", "separable state")) {
        SeparableState::Term term;
        const ComplexMatrix a = matrix_from_json(field(t, "a", "state term"));
        if (a.imag().norm() != 0.0) {
            throw InvalidInput("state term: first factor must have real entries");
        }
        term.a = a.real();
        term.b = matrix_from_json(field(t, "b", "state term"));
        z.terms.push_back(std::move(term));
    }
    z.normalized = j.value("normalized", false);
    if (z.terms.empty()) {
        throw InvalidInput("separable state: needs at least one term");
    }
    return z;
}

Json structured_to_json(const StructuredOperator& op) {
    Json stages = Json::array();
    for (const auto& stage : op.stages()) {
        Json o;
        std::visit(
            [&](const auto& st) {
                using T = std::decay_t<decltype(st)>;
                if constexpr (std::is_same_v<T, StructuredOperator::PermutationStage>) {
                    o["type"] = "permutation";
                    o["image"] = st.perm.image;
                    o["inverse"] = st.inverse;
                } else if constexpr (std::is_same_v<T,
                                                    StructuredOperator::KroneckerStage>) {
                    o["type"] = "kronecker";
                    Json factors = Json::array();
                    for (const auto& f : st.factors) {
                        factors.push_back(matrix_to_json(f));
                    }
                    o["factors"] = std::move(factors);
                } else if constexpr (std::is_same_v<
                                         T, StructuredOperator::BlockDiagonalStage>) {
                    o["type"] = "block_diagonal";
                    Json blocks = Json::array();
                    for (const auto& b : st.blocks) {
                        blocks.push_back(structured_to_json(b));
                    }
                    o["blocks"] = std::move(blocks);
                } else if constexpr (std::is_same_v<T, StructuredOperator::DenseStage>) {
                    o["type"] = "dense";
                    o["matrix"] = matrix_to_json(st.mat);
                } else {
                    o["type"] = "embed";
                    o["out_dim"] = st.out_dim;
                    o["in_dim"] = st.in_dim;
                    o["offset"] = st.offset;
                }
            },
            stage);
        stages.push_back(std::move(o));
    }
    Json out;
    out["rows"] = op.rows();
    out["cols"] = op.cols();
    out["stages"] = std::move(stages);
    return out;
}

StructuredOperator structured_from_json(const Json& j) {
    StructuredOperator op;
    for (const auto& o : field(j, "stages", "structured operator")) {
        const std::string type = field(o, "type", "stage").get<std::string>();
        if (type == "permutation") {
            Permutation p;
            p.image = field(o, "image", "stage").get<std::vector<Index>>();
            p.size = static_cast<Index>(p.image.size());
            op.then(StructuredOperator::permutation(std::move(p),
                                                    o.value("inverse", false)));
        } else if (type == "kronecker") {
            std::vector<ComplexMatrix> factors;
            for (const auto& f : field(o, "factors", "stage")) {
                factors.push_back(matrix_from_json(f));
            }
            op.then(StructuredOperator::kronecker(std::move(factors)));
        } else if (type == "block_diagonal") {
            std::vector<StructuredOperator> blocks;
            for (const auto& b : field(o, "blocks", "stage")) {
                blocks.push_back(structured_from_json(b));
            }
            op.then(StructuredOperator::block_diagonal(std::move(blocks)));
        } else if (type == "dense") {
            op.then(StructuredOperator::dense(
                matrix_from_json(field(o, "matrix", "stage"))));
        } else if (type == "embed") {
            op.then(StructuredOperator::embed(field(o, "out_dim", "stage").get<Index>(),
                                              field(o, "in_dim", "stage").get<Index>(),
                                              field(o, "offset", "stage").get<Index>()));
        } else {
            throw InvalidInput("structured operator: unknown stage type '" + type + "'");
        }
    }
    return op;
}

Json decomposition_to_json(const WeightedIsometryDecomposition& d,
                           const std::string& kind) {
    Json out;
    out["kind"] = kind;
    out["target_dim"] = d.target_dim;
    out["weight"] = d.weight;
    out["m"] = d.copies;
    out["summand"] = matrix_to_json(d.summand.mat());
    if (d.per_summand) {
        Json per = Json::array();
        for (const auto& s : *d.per_summand) {
            per.push_back(matrix_to_json(s.mat()));
        }
        out["per_summand"] = std::move(per);
    }
    if (d.materialized()) {
        Json isometries = Json::array();
        for (const auto& v : d.isometries) {
            isometries.push_back(matrix_to_json(v.mat()));
        }
        out["isometries"] = std::move(isometries);
    } else {
        Json ops = Json::array();
        for (const auto& v : d.structured) {
            ops.push_back(structured_to_json(v));
        }
        out["structured_isometries"] = std::move(ops);
    }
    return out;
}

WeightedIsometryDecomposition decomposition_from_json(const Json& j) {
    WeightedIsometryDecomposition d{
        field(j, "target_dim", "decomposition").get<Index>(),
        field(j, "weight", "decomposition").get<double>(),
        HermitianMatrix(matrix_from_json(field(j, "summand", "decomposition"))),
        {},
        std::nullopt,
        {},
        j.value("m", Index{1})};
    if (j.contains("per_summand")) {
        std::vector<HermitianMatrix> per;
        for (const auto& s : j.at("per_summand")) {
            per.emplace_back(matrix_from_json(s));
        }
        d.per_summand = std::move(per);
    }
    if (j.contains("isometries")) {
        for (const auto& v : j.at("isometries")) {
            d.isometries.emplace_back(matrix_from_json(v));
        }
    } else if (j.contains("structured_isometries")) {
        for (const auto& v : j.at("structured_isometries")) {
            d.structured.push_back(structured_from_json(v));
        }
    } else {
        throw InvalidInput("decomposition: missing isometries");
    }
    return d;
}

GeneratorConfig config_from_json(const Json& j) {
    GeneratorConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.beta = j.value("beta", Index{2});
    cfg.n = j.value("n", Index{2});
    cfg.method = j.value("method", std::string("separable"));
    cfg.terms = j.value("terms", Index{2});
    cfg.iteration_cap = j.value("iteration_cap", Index{500});
    cfg.budget = j.value("budget", long{0});
    cfg.n_h = j.value("n_h", Index{2});
    cfg.n_f = j.value("n_f", Index{2});
    cfg.normalized = j.value("normalized", false);
    return cfg;
}

Json config_to_json(const GeneratorConfig& cfg) {
    Json out;
    out["seed"] = cfg.seed;
    out["beta"] = cfg.beta;
    out["n"] = cfg.n;
    out["method"] = cfg.method;
    out["terms"] = cfg.terms;
    out["iteration_cap"] = cfg.iteration_cap;
    out["budget"] = cfg.budget;
    out["n_h"] = cfg.n_h;
    out["n_f"] = cfg.n_f;
    out["normalized"] = cfg.normalized;
    return out;
}

std::string digest_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex;
    for (int shift = 60; shift >= 0; shift -= 4) {
        out << ((h >> shift) & 0xF);
    }
    return out.str();
}

std::string json_digest(const Json& j) {
    return digest_hex(j.dump());
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open file '" + path + "'");
    }
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("cannot parse '" + path + "': " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidInput("cannot write file '" + path + "'");
    }
    out << j.dump(2) << "\n";
}

}  // namespace hermblock
