#include <gtest/gtest.h>

#include "opsplit/algebra/expand.hpp"
#include "opsplit/algebra/matrix_oracle.hpp"
#include "opsplit/common/errors.hpp"

using namespace opsplit;
using namespace opsplit::algebra;

namespace {

Word w(std::initializer_list<int> letters)
{
    Word out;
    for (int l : letters)
        out.letters.push_back(static_cast<std::uint8_t>(l));
    return out;
}

SchemeExpr forward_product(int d)
{
    std::vector<std::pair<Rational, int>> f;
    for (int i = 0; i <= d + 1; ++i)
        f.emplace_back(Rational(1), i);
    return SchemeExpr::product(f);
}

SchemeExpr nv_b(int d)
{
    std::vector<std::pair<Rational, int>> fwd, bwd;
    for (int i = 0; i <= d + 1; ++i) {
        fwd.emplace_back(Rational(1), i);
        bwd.emplace_back(Rational(1), d + 1 - i);
    }
    return SchemeExpr::combine(Rational(1, 2), SchemeExpr::product(fwd), Rational(1, 2), SchemeExpr::product(bwd));
}

} // namespace

TEST(Rational, ParseAndFormat)
{
    EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
    EXPECT_EQ(parse_rational("-4"), Rational(-4));
    EXPECT_EQ(to_string(Rational(-2, 4)), "-1/2");
    EXPECT_THROW(parse_rational("1/0"), ParseError);
    EXPECT_THROW(parse_rational("x"), ParseError);
}

TEST(Expand, SingleExponential)
{
    Series s = expand(SchemeExpr::product({{Rational(1), 0}}), 0, 2);
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s.coefficient(w({})), Rational(1));
    EXPECT_EQ(s.coefficient(w({0})), Rational(1));
    EXPECT_EQ(s.coefficient(w({0, 0})), Rational(1, 2));
}

TEST(Expand, NinomiyaVictoirBMatchesTargetAtDegreeTwo)
{
    Series s = expand(nv_b(0), 0, 2);
    EXPECT_EQ(s.coefficient(w({0, 1})), Rational(1, 2));
    EXPECT_EQ(s.coefficient(w({1, 0})), Rational(1, 2));
    EXPECT_EQ(s.coefficient(w({0, 0})), Rational(1, 2));
    EXPECT_EQ(s.coefficient(w({1, 1})), Rational(1, 2));
    EXPECT_EQ(s.coefficient(w({0})), Rational(1));
    EXPECT_EQ(s.coefficient(w({1})), Rational(1));
    EXPECT_EQ(s, target_series(0, 2));
}

TEST(Expand, RejectsBadExpressions)
{
    auto half = SchemeExpr::combine(Rational(1, 2), forward_product(0), Rational(0), forward_product(0));
    EXPECT_THROW(expand(half, 0, 2), DomainError);
    EXPECT_THROW(expand(forward_product(2), 0, 2), DomainError); // generator 3 with d = 0
    EXPECT_THROW(expand(forward_product(0), 0, 7), CapacityError);
    EngineLimits tight{6, 100};
    EXPECT_THROW(expand(forward_product(3), 3, 3, tight), CapacityError);
}

TEST(TargetSeries, SmallCases)
{
    Series s = target_series(0, 1);
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s.coefficient(w({})), Rational(1));
    EXPECT_EQ(s.coefficient(w({0})), Rational(1));
    EXPECT_EQ(s.coefficient(w({1})), Rational(1));
    for (int d = 0; d < 4; ++d) {
        Series id = target_series(d, 0);
        EXPECT_EQ(id.size(), 1u);
        EXPECT_EQ(id.coefficient(w({})), Rational(1));
    }
    // (L0 + L1)^3 / 3! has every degree-3 word with coefficient 1/6
    EXPECT_EQ(target_series(0, 3).coefficient(w({0, 1, 1})), Rational(1, 6));
    EXPECT_EQ(target_series(0, 3).size(), 1u + 2u + 4u + 8u);
}

TEST(OrderOf, ForwardProductIsFirstOrder)
{
    OrderResult r = order_of(forward_product(0), 0, 3);
    EXPECT_EQ(r.order, 1);
    ASSERT_TRUE(r.first_defect.has_value());
    EXPECT_EQ(r.first_defect->degree, 2);
    EXPECT_EQ(r.first_defect->word, w({1, 0}));
    EXPECT_EQ(r.first_defect->scheme_coefficient, Rational(0));
    EXPECT_EQ(r.first_defect->target_coefficient, Rational(1, 2));
}

TEST(OrderOf, SingleCombinedExponentialMatchesTarget)
{
    SchemeExpr full = parse_scheme_expr("exp(1, 0+1)");
    OrderResult r = order_of(full, 0, 5);
    EXPECT_EQ(r.order, 5);
    EXPECT_FALSE(r.first_defect.has_value());
    for (int m = 0; m <= 5; ++m)
        EXPECT_EQ(expand(full, 0, m), target_series(0, m));
}

TEST(OrderOf, NinomiyaVictoirB)
{
    for (int d = 1; d <= 3; ++d) {
        OrderResult r = order_of(nv_b(d), d, 3);
        EXPECT_EQ(r.order, 2) << "d=" << d;
        ASSERT_TRUE(r.first_defect);
        EXPECT_EQ(r.first_defect->degree, 3);
    }
}

TEST(Series, EmptyWordCoefficientIsOne)
{
    const char* exprs[] = {"1/3 * exp(1,0) exp(2,1) + 2/3 * exp(1/5,1)",
                           "2 * exp(1,0) - 1 * exp(1/2,1) exp(1/2,0)", "exp(3,1) exp(1/7,0)"};
    for (const char* text : exprs)
        EXPECT_EQ(expand(parse_scheme_expr(text), 0, 3).coefficient(w({})), Rational(1)) << text;
}

TEST(Series, ReversalSymmetryOfAveragedProducts)
{
    SchemeExpr expr = parse_scheme_expr("1/2 * exp(1,0) exp(1/3,1) exp(2,2) + 1/2 * exp(2,2) exp(1/3,1) exp(1,0)");
    Series s = expand(expr, 1, 4);
    EXPECT_EQ(s, s.reversed());
}

TEST(Parser, RoundTripAndErrors)
{
    const std::string text = "1/2 * exp(1/2,0) exp(1,1) exp(1,2) exp(1/2,0) + 1/2 * exp(1/2,0) exp(1,2) exp(1,1) exp(1/2,0)";
    SchemeExpr e = parse_scheme_expr(text);
    EXPECT_EQ(e.terms().size(), 2u);
    EXPECT_EQ(e.terms()[0].factors.size(), 4u);
    EXPECT_EQ(parse_scheme_expr(to_string(e)), e);
    EXPECT_EQ(parse_scheme_expr("1*exp(1,0) exp(1,1)"), forward_product(0));
    try {
        parse_scheme_expr("1/2 * exp(1,0) + 1/2 * exq(1,1)");
        FAIL();
    } catch (const ParseError& err) {
        EXPECT_EQ(err.position(), 23u);
    }
    EXPECT_THROW(parse_scheme_expr("exp(1 0)"), ParseError);
    EXPECT_THROW(parse_scheme_expr(""), ParseError);
}

TEST(MatrixOracle, BuiltInVerdicts)
{
    Rng rng(7);
    OracleVerdict v = matrix_oracle_check(nv_b(1), 1, 2, 10, rng);
    EXPECT_TRUE(v.identity_holds);
    EXPECT_TRUE(v.agrees);

    OracleVerdict f = matrix_oracle_check(forward_product(0), 0, 2, 10, rng);
    EXPECT_FALSE(f.identity_holds);
    EXPECT_TRUE(f.agrees);

    OracleVerdict zero = matrix_oracle_check(forward_product(0), 0, 0, 3, rng);
    EXPECT_TRUE(zero.identity_holds);
    EXPECT_TRUE(zero.agrees);

    SchemeExpr splitting = parse_scheme_expr("exp(1/2,0) exp(1/2,1) exp(1,2) exp(1/2,1) exp(1/2,0)");
    EXPECT_EQ(expand(splitting, 1, 2), target_series(1, 2));
    EXPECT_TRUE(matrix_oracle_check(splitting, 1, 2, 10, rng).identity_holds);
}

// Random expressions of degree <= 3: the oracle must agree with the symbolic verdict.
TEST(MatrixOracle, AgreesWithSymbolicOnRandomExpressions)
{
    Rng rng(2024);
    std::uniform_int_distribution<int> nterms(1, 3), nfactors(1, 4), gen(0, 2), num(1, 4), den(1, 3), coin(0, 3);
    int matches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ProductTerm> terms;
        const int k = nterms(rng.engine());
        Rational remaining = 1;
        for (int j = 0; j < k; ++j) {
            ProductTerm t;
            t.weight = (j + 1 == k) ? remaining : Rational(num(rng.engine()), 2 * den(rng.engine()));
            remaining -= t.weight;
            const int nf = nfactors(rng.engine());
            for (int i = 0; i < nf; ++i)
                t.factors.push_back(Factor{Rational(num(rng.engine()), den(rng.engine())), {gen(rng.engine())}});
            terms.push_back(t);
        }
        // Every fourth expression is a symmetric NV mixture so both verdicts occur.
        SchemeExpr e = coin(rng.engine()) == 0 ? nv_b(1) : SchemeExpr(terms);
        const int m = 1 + trial % 3;
        OracleVerdict v = matrix_oracle_check(e, 1, m, 2, rng);
        EXPECT_TRUE(v.agrees) << to_string(e) << " m=" << m;
        matches += v.symbolic_match;
    }
    EXPECT_GT(matches, 0);
}
