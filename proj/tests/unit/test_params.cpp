#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "netforge/error.hpp"
#include "netforge/formula.hpp"
#include "netforge/params.hpp"
#include "netforge/random.hpp"
#include "random_circuit.hpp"

using namespace netforge;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::Io;
}

Formula::Lookup table(std::map<std::string, double> values) {
  return [values = std::move(values)](std::string_view name) -> std::optional<double> {
    auto it = values.find(std::string(name));
    if (it == values.end()) return std::nullopt;
    return it->second;
  };
}

double eval(std::string_view text, std::map<std::string, double> values = {}) {
  return Formula::parse(text).evaluate(table(std::move(values)));
}

}  // namespace

// Reference outputs below come from a separate Python transcription of
// splitmix64 seeding + xoshiro256**.
TEST_CASE("rng reference stream") {
  Rng a(0);
  CHECK(a.next() == 0x99ec5f36cb75f2b4ULL);
  CHECK(a.next() == 0xbf6e1f784956452aULL);
  CHECK(a.next() == 0x1a5f849d4933e6e0ULL);
  Rng b(42);
  CHECK(b.next() == 0x15780b2e0c2ec716ULL);
  CHECK(b.next() == 0x6104d9866d113a7eULL);
  CHECK(b.next() == 0xae17533239e499a1ULL);

  Rng c(7);
  CHECK(c.uniform() == 0.7005764821796896);
  Rng d(7);
  CHECK(d.standard_normal() == doctest::Approx(-0.2790239910251981).epsilon(1e-15));
}

TEST_CASE("rng reseed and copies replay") {
  Rng a(123);
  a.next();
  Rng b = a;
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  a.reseed(5);
  Rng fresh(5);
  CHECK(a == fresh);
}

TEST_CASE("sample: degenerate and deterministic") {
  Rng rng(1);
  CHECK(sample(RandomSpec::uniform(0.3, 0.3), rng) == 0.3);
  CHECK(sample(RandomSpec::gauss(0.4, 0.0), rng) == 0.4);
  Rng r1(99), r2(99);
  CHECK(sample(RandomSpec::gauss(0.4, 0.1), r1) == sample(RandomSpec::gauss(0.4, 0.1), r2));
}

TEST_CASE("sample: each gauss consumes two words, uniform one") {
  Rng a(3), b(3);
  sample(RandomSpec::gauss(0, 1), a);
  b.next();
  b.next();
  CHECK(a == b);
  sample(RandomSpec::uniform(0, 1), a);
  b.next();
  CHECK(a == b);
}

TEST_CASE("sample: gauss statistics") {
  Rng rng(2024);
  const int n = 100000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double v = sample(RandomSpec::gauss(0.4, 0.1), rng);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::fabs(mean - 0.4) < 0.002);
  CHECK(std::fabs(sd - 0.1) < 0.002);
}

TEST_CASE("sample: uniform and lognormal ranges") {
  Rng rng(8);
  double lsum = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = sample(RandomSpec::uniform(-2, 3), rng);
    CHECK(u >= -2);
    CHECK(u < 3);
    const double l = sample(RandomSpec::lognormal(0, 0.25), rng);
    CHECK(l > 0);
    lsum += std::log(l);
  }
  CHECK(std::fabs(lsum / 20000) < 0.01);
}

TEST_CASE("random spec validation") {
  CHECK(code_of([] { RandomSpec::gauss(0, -1).validate(); }) == Errc::InvalidSpec);
  CHECK(code_of([] { RandomSpec::uniform(2, 1).validate(); }) == Errc::InvalidSpec);
  CHECK(code_of([] { RandomSpec::lognormal(0, -0.1).validate(); }) == Errc::InvalidSpec);
  CHECK(code_of([] { RandomSpec::gauss(NAN, 1).validate(); }) == Errc::InvalidSpec);
  CHECK(code_of([] { ParamValue v(RandomSpec::uniform(1, 0)); }) == Errc::InvalidSpec);
  CHECK_NOTHROW(RandomSpec::uniform(1, 1).validate());
}

TEST_CASE("formula: parse shapes") {
  using Op = Formula::BinaryOp;
  CHECK(Formula::parse("1 / vth") == Formula::binary(Op::Div, Formula::number(1), Formula::identifier("vth")));
  CHECK(Formula::parse("0") == Formula::number(0));
  CHECK(Formula::parse("-x^2") ==
        Formula::negate(Formula::binary(Op::Pow, Formula::identifier("x"), Formula::number(2))));
  CHECK(Formula::parse("2^3^2") ==
        Formula::binary(Op::Pow, Formula::number(2), Formula::binary(Op::Pow, Formula::number(3), Formula::number(2))));
  CHECK(Formula::parse("a - b - c") ==
        Formula::binary(Op::Sub, Formula::binary(Op::Sub, Formula::identifier("a"), Formula::identifier("b")),
                        Formula::identifier("c")));
  CHECK(Formula::parse("max(a, 1)") ==
        Formula::call(Formula::Function::Max, {Formula::identifier("a"), Formula::number(1)}));
}

TEST_CASE("formula: arithmetic against hand evaluation") {
  CHECK(eval("1+2*3") == 7);
  CHECK(eval("(1+2)*3") == 9);
  CHECK(eval("2^3^2") == 512);
  CHECK(eval("-2^2") == -4);
  CHECK(eval("(-2)^2") == 4);
  CHECK(eval("10 / 4") == 2.5);
  CHECK(eval("7 - 2 - 1") == 4);
  CHECK(eval("2 ^ -1") == 0.5);
  CHECK(eval("1 / vth", {{"vth", 0.4}}) == 1 / 0.4);
  CHECK(eval("1.5e3 + 2E-1") == 1500.2);
  CHECK(eval(".5 * 4") == 2);
}

TEST_CASE("formula: functions") {
  CHECK(eval("min(3, 1, 2)") == 1);
  CHECK(eval("max(3, 1, 2)") == 3);
  CHECK(eval("min(4)") == 4);
  CHECK(eval("abs(-2.5)") == 2.5);
  CHECK(eval("sqrt(16)") == 4);
  CHECK(eval("exp(0)") == 1);
  CHECK(eval("ln(exp(2))") == doctest::Approx(2));
  CHECK(eval("log10(1000)") == doctest::Approx(3));
  CHECK(eval("pow(2, 10)") == 1024);
}

TEST_CASE("formula: errors") {
  CHECK(code_of([] { Formula::parse("1 +"); }) == Errc::SyntaxError);
  CHECK(code_of([] { Formula::parse(""); }) == Errc::SyntaxError);
  CHECK(code_of([] { Formula::parse("(1"); }) == Errc::SyntaxError);
  CHECK(code_of([] { Formula::parse("1 2"); }) == Errc::SyntaxError);
  CHECK(code_of([] { Formula::parse("foo(1)"); }) == Errc::UnknownFunction);
  CHECK(code_of([] { Formula::parse("pow(1)"); }) == Errc::SyntaxError);
  CHECK(code_of([] { Formula::parse("sqrt(1, 2)"); }) == Errc::SyntaxError);
  CHECK(code_of([] { eval("1 / 0"); }) == Errc::DivisionByZero);
  CHECK(code_of([] { eval("x + 1"); }) == Errc::UnresolvedIdentifier);
  CHECK(code_of([] { eval("sqrt(-1)"); }) == Errc::NonFiniteResult);
  CHECK(code_of([] { eval("ln(0)"); }) == Errc::NonFiniteResult);

  try {
    Formula::parse("1 + * 2");
    FAIL("no throw");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);
  }
  try {
    Formula::parse("2 * nope(3)");
    FAIL("no throw");
  } catch (const SyntaxError& e) {
    CHECK(e.code() == Errc::UnknownFunction);
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("formula: minimal parentheses") {
  auto canon = [](std::string_view s) { return Formula::parse(s).to_string(); };
  CHECK(canon("1/vth") == "1 / vth");
  CHECK(canon("((a+b))*c") == "(a + b) * c");
  CHECK(canon("a-(b-c)") == "a - (b - c)");
  CHECK(canon("(a-b)-c") == "a - b - c");
  CHECK(canon("a/(b*c)") == "a / (b * c)");
  CHECK(canon("(2^3)^2") == "(2^3)^2");
  CHECK(canon("2^(3^2)") == "2^3^2");
  CHECK(canon("(-x)^2") == "(-x)^2");
  CHECK(canon("-(x^2)") == "-x^2");
  CHECK(canon("min( a,b )") == "min(a, b)");
}

TEST_CASE("formula: parse of unparse is identity over random trees") {
  Rng rng(77);
  for (int i = 0; i < 2000; ++i) {
    const Formula f = test::random_formula(rng);
    const std::string text = f.to_string();
    INFO(text);
    CHECK(Formula::parse(text) == f);
    CHECK(Formula::parse(text).to_string() == text);
  }
}

TEST_CASE("formula: substitution matches evaluation") {
  Rng rng(5);
  const char* exprs[] = {"a * b + c", "sqrt(abs(a - b)) / (c + 10)", "-a^2 + pow(b, 2) - min(a, b, c)",
                         "exp(a / 10) * ln(b + 20)"};
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::string, double> ctx{{"a", rng.uniform() * 10 - 5}, {"b", rng.uniform() * 10 - 5}, {"c", rng.uniform() * 10}};
    for (const char* e : exprs) {
      const Formula f = Formula::parse(e);
      const Formula g = f.substitute(table(ctx));
      CHECK(g.identifiers().empty());
      CHECK(g.evaluate(table({})) == f.evaluate(table(ctx)));
    }
  }
  const Formula partial = Formula::parse("a + b").substitute(table({{"a", 1}}));
  CHECK(partial.identifiers() == std::vector<std::string>{"b"});
}

TEST_CASE("formula: identifiers in order of first appearance") {
  CHECK(Formula::parse("b + a * b - min(c, a)").identifiers() == std::vector<std::string>{"b", "a", "c"});
}

TEST_CASE("format_shortest round-trips") {
  Rng rng(11);
  for (int i = 0; i < 5000; ++i) {
    const double v = std::ldexp(rng.uniform() - 0.5, static_cast<int>(rng.next() % 200) - 100);
    CHECK(std::stod(format_shortest(v)) == v);
  }
  CHECK(format_shortest(2.5) == "2.5");
  CHECK(format_shortest(1e-12) == "1e-12");
}

TEST_CASE("eval_params: nmos example") {
  Rng rng(0);
  const Params p{{"w", 0.135}, {"vth", 0.4}, {"test", Formula::parse("1/vth")}};
  const EvaluatedParams out = eval_params(p, rng);
  REQUIRE(out.size() == 3);
  CHECK(out.keys() == std::vector<std::string>{"w", "vth", "test"});
  CHECK(std::get<double>(*out.get("w")) == 0.135);
  CHECK(std::get<double>(*out.get("vth")) == 0.4);
  CHECK(std::get<double>(*out.get("test")) == 2.5);
}

TEST_CASE("eval_params: permutation invariance with random specs") {
  const std::vector<std::pair<std::string, ParamValue>> items{
      {"w", 0.135},
      {"vth", RandomSpec::gauss(0.4, 0.1)},
      {"test", Formula::parse("1 / vth")},
      {"len", RandomSpec::uniform(1, 2)},
      {"area", Formula::parse("w * len")},
      {"label", "nominal"}};
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::optional<std::map<std::string, EvaluatedValue>> reference;
  int perms = 0;
  do {
    Params p;
    for (auto i : order) p.set(items[i].first, items[i].second);
    Rng rng(31);
    const EvaluatedParams out = eval_params(p, rng);
    std::map<std::string, EvaluatedValue> m(out.begin(), out.end());
    if (!reference) reference = m;
    CHECK(m == *reference);
    ++perms;
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(perms == 720);
  CHECK(std::get<double>(reference->at("test")) == 1 / std::get<double>(reference->at("vth")));
}

TEST_CASE("eval_params: determinism and context") {
  const Params p{{"x", Formula::parse("_i * 2 + base")}, {"n", RandomSpec::gauss(0, 1)}};
  Rng a(9), b(9);
  EvalContext ctx{{"_i", 3}, {"base", 1}};
  CHECK(eval_params(p, ctx, a) == eval_params(p, ctx, b));
  Rng c(0);
  CHECK(std::get<double>(*eval_params(p, ctx, c).get("x")) == 7);

  // Siblings shadow context names.
  const Params shadow{{"base", 10}, {"y", Formula::parse("base + 1")}};
  CHECK(std::get<double>(*eval_params(shadow, ctx, c).get("y")) == 11);
}

TEST_CASE("eval_params: errors") {
  Rng rng(0);
  try {
    eval_params(Params{{"a", Formula::parse("b")}, {"b", Formula::parse("a")}}, rng);
    FAIL("no throw");
  } catch (const CycleError& e) {
    CHECK(e.code() == Errc::CyclicDependency);
    CHECK(e.cycle().size() == 3);
    CHECK(e.cycle().front() == e.cycle().back());
  }
  CHECK(code_of([&] { eval_params(Params{{"a", Formula::parse("a + 1")}}, rng); }) == Errc::CyclicDependency);
  CHECK(code_of([&] { eval_params(Params{{"a", Formula::parse("zz")}}, rng); }) == Errc::UnresolvedIdentifier);
  CHECK(code_of([&] { eval_params(Params{{"t", "text"}, {"a", Formula::parse("t")}}, rng); }) ==
        Errc::NonNumericReference);
  CHECK(code_of([&] { eval_params(Params{{"a", 0}, {"b", Formula::parse("1 / a")}}, rng); }) == Errc::DivisionByZero);
  CHECK(code_of([] { ParamValue v(INFINITY); }) == Errc::InvalidNumber);
}

TEST_CASE("merge_params shadows key by key") {
  const Params base{{"w", 0.135}, {"l", 0.045}};
  const Params over{{"w", 0.27}, {"m", 2}};
  const Params merged = merge_params(base, over);
  CHECK(merged.keys() == std::vector<std::string>{"w", "l", "m"});
  for (const auto& [k, v] : merged) {
    const ParamValue* expected = over.contains(k) ? over.get(k) : base.get(k);
    CHECK(v == *expected);
  }
  CHECK(merge_params(base, {}) == base);
}

TEST_CASE("corner lookup") {
  const Params tt{{"C", 1e-12}};
  const ParamSet set{{"TT", tt}};
  CHECK(corner(set, "TT") == tt);
  try {
    corner(set, "FF");
    FAIL("no throw");
  } catch (const UnknownCornerError& e) {
    CHECK(e.code() == Errc::UnknownCorner);
    CHECK(e.available() == std::vector<std::string>{"TT"});
  }
  CHECK(code_of([] { corner(ParamSet{}, "TT"); }) == Errc::UnknownCorner);
}

TEST_CASE("SI suffix parsing against a suffix table") {
  const std::pair<const char*, double> table[] = {{"f", 1e-15}, {"p", 1e-12}, {"n", 1e-9}, {"u", 1e-6},
                                                   {"m", 1e-3},  {"k", 1e3},    {"meg", 1e6}, {"g", 1e9},
                                                   {"t", 1e12}};
  for (const auto& [suffix, scale] : table) {
    for (const char* mantissa : {"1", "4.7", "-2.5", "100"}) {
      const double expected = std::stod(std::string(mantissa) + "e" + std::to_string(static_cast<int>(std::lround(std::log10(scale)))));
      std::string upper(suffix);
      std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
      CHECK(parse_si_number(std::string(mantissa) + suffix) == expected);
      CHECK(parse_si_number(std::string(mantissa) + upper) == expected);
    }
  }
  CHECK(parse_si_number("1p") == 1e-12);
  CHECK(parse_si_number("3e-2") == 3e-2);
  CHECK(parse_si_number("42") == 42);
  CHECK_FALSE(parse_si_number("1x"));
  CHECK_FALSE(parse_si_number("abc"));
  CHECK_FALSE(parse_si_number(""));
  CHECK_FALSE(parse_si_number("1e999"));
  CHECK_FALSE(parse_si_number("1 k"));
}
