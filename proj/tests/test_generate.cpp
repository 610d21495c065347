#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hermblock/certify.hpp"
#include "hermblock/generate.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

using namespace hermblock;

TEST_CASE("generators are deterministic bit for bit") {
    for (const char* method : {"separable", "gram", "projected"}) {
        GeneratorConfig cfg;
        cfg.seed = 42;
        cfg.beta = 2;
        cfg.n = 2;
        cfg.method = method;
        const BlockMatrix a = gen_hermitian_block_psd(cfg);
        const BlockMatrix b = gen_hermitian_block_psd(cfg);
        CHECK((a.mat() - b.mat()).norm() == 0.0);

        cfg.seed = 43;
        const BlockMatrix c = gen_hermitian_block_psd(cfg);
        CHECK((a.mat() - c.mat()).norm() != 0.0);
    }
}

TEST_CASE("every construction satisfies the Hermitian-block hypothesis") {
    for (const char* method : {"separable", "gram", "projected"}) {
        for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
            GeneratorConfig cfg;
            cfg.seed = seed;
            cfg.beta = 3;
            cfg.n = 2;
            cfg.terms = 2;
            cfg.method = method;
            const BlockMatrix h = gen_hermitian_block_psd(cfg);
            CHECK(h.hermitian_blocks());
            double lambda_min = 0.0;
            CHECK(is_psd(h.carrier(), &lambda_min));
            // Block-Hermitian deviation, recomputed explicitly.
            double worst = 0.0;
            for (Index s = 0; s < h.beta(); ++s) {
                for (Index t = 0; t < h.beta(); ++t) {
                    const ComplexMatrix blk = h.block(s, t);
                    worst = std::max(worst, (blk - blk.adjoint()).norm());
                }
            }
            const bool exact_construction =
                std::string(method) != "projected";
            CHECK(worst <= (exact_construction ? 1e-13 : 1e-9));
        }
    }
}

TEST_CASE("seed 42 separable instance passes the majorization check") {
    GeneratorConfig cfg;
    cfg.seed = 42;
    cfg.beta = 2;
    cfg.n = 2;
    cfg.terms = 2;
    const BlockMatrix h = gen_hermitian_block_psd(cfg);
    CHECK(check_hiroshima(h).passed);
}

TEST_CASE("projected generator reports residuals when capped") {
    GeneratorConfig cfg;
    cfg.seed = 4;
    cfg.beta = 3;
    cfg.n = 2;
    cfg.method = "projected";
    cfg.iteration_cap = 1;
    CHECK_THROWS_AS(gen_hermitian_block_psd(cfg), NumericalFailure);
}

TEST_CASE("unknown method is an input error") {
    GeneratorConfig cfg;
    cfg.method = "haar";
    CHECK_THROWS_AS(gen_hermitian_block_psd(cfg), InvalidInput);
}

TEST_CASE("gen_commuting_family") {
    GeneratorConfig cfg;
    cfg.seed = 5;
    cfg.beta = 3;
    cfg.n = 4;
    const CommutingFamily family = gen_commuting_family(cfg);
    REQUIRE(family.members.size() == 3);
    CHECK(family.max_commutator_norm() <= 1e-10);
    CHECK(family.commutes_within_tolerance());
    REQUIRE(family.witness_basis.has_value());
    CHECK((family.witness_basis->adjoint() * (*family.witness_basis) -
           ComplexMatrix::Identity(4, 4))
              .norm() <= 1e-12);

    SUBCASE("single member families are trivially commuting") {
        cfg.beta = 1;
        CHECK(gen_commuting_family(cfg).commutes_within_tolerance());
    }
}

TEST_CASE("gen_separable_real_factor") {
    GeneratorConfig cfg;
    cfg.seed = 6;
    cfg.terms = 3;
    cfg.n_h = 3;
    cfg.n_f = 2;
    const SeparableState z = gen_separable_real_factor(cfg);
    CHECK(z.validate().empty());

    SUBCASE("assembly matches the explicit tensor sum") {
        ComplexMatrix expected =
            ComplexMatrix::Zero(z.dim_h() * z.dim_f(), z.dim_h() * z.dim_f());
        for (const auto& term : z.terms) {
            expected += Eigen::kroneckerProduct(term.a.cast<Complex>(), term.b);
        }
        CHECK((z.assemble().mat() - expected).norm() == 0.0);
    }
    SUBCASE("normalization fixes the trace to one") {
        cfg.normalized = true;
        const SeparableState unit = gen_separable_real_factor(cfg);
        CHECK(std::abs(unit.assemble().mat().trace().real() - 1.0) <= 1e-12);
    }
    SUBCASE("generated states pass the separability criterion") {
        CHECK(check_nielsen_kempe(z).passed);
    }
}

TEST_CASE("norm gap evaluator") {
    Eigen::VectorXcd x(4);
    x << 1, 0, 0, 1;
    const BlockMatrix rank_one = BlockMatrix::partition(
        HermitianMatrix(ComplexMatrix(x * x.adjoint())), 2, 2);
    CHECK(norm_gap_margin(rank_one) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("counterexample search") {
    SUBCASE("zero budget evaluates nothing") {
        GeneratorConfig cfg;
        cfg.budget = 0;
        const CounterexampleSearchResult r = search_counterexample_normal_blocks(cfg);
        CHECK(r.evaluated == 0);
        CHECK_FALSE(r.instance.has_value());
    }
    SUBCASE("search is deterministic in the seed") {
        GeneratorConfig cfg;
        cfg.seed = 12;
        cfg.budget = 50;
        const auto a = search_counterexample_normal_blocks(cfg);
        const auto b = search_counterexample_normal_blocks(cfg);
        CHECK(a.best_margin == b.best_margin);
        CHECK(a.evaluated == b.evaluated);
    }
    SUBCASE("Hermitian-restricted runs never report a gap") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            GeneratorConfig cfg;
            cfg.seed = seed;
            cfg.budget = 150;
            const CounterexampleSearchResult r =
                search_counterexample_normal_blocks(cfg, /*hermitian_restricted=*/true);
            CHECK(r.best_margin <= 1e-10);
            CHECK_FALSE(r.instance.has_value());
        }
    }
    SUBCASE("any reported instance is a valid normal-block witness") {
        GeneratorConfig cfg;
        cfg.seed = 2;
        cfg.budget = 400;
        const CounterexampleSearchResult r = search_counterexample_normal_blocks(cfg);
        if (r.instance) {
            CHECK(norm_gap_margin(*r.instance) > 0.0);
            const ComplexMatrix xblk = r.instance->block(0, 1);
            CHECK((xblk * xblk.adjoint() - xblk.adjoint() * xblk).norm() <=
                  1e-10 * (1.0 + xblk.norm() * xblk.norm()));
        }
    }
}
