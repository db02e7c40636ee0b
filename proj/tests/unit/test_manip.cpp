#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "netforge/error.hpp"
#include "netforge/manip.hpp"
#include "support.hpp"

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

std::vector<std::string> net_strings(const Instance& i) {
  std::vector<std::string> out;
  for (const auto& n : i.nets()) out.push_back(n.str());
  return out;
}

}  // namespace

TEST_CASE("parallel") {
  const Instance res(test::resistor({1, "GND"}));
  const Manipulation p = parallel(res, 3);
  REQUIRE(p.size() == 3);
  for (const auto& i : p) CHECK(i.nets() == std::vector<NetRef>{1, "GND"});
  CHECK(parallel(res, 0).empty());
  REQUIRE(parallel(res, 1).size() == 1);
  CHECK(parallel(res, 1)[0] == res);
}

TEST_CASE("chain: mosfet wiring by hand") {
  const Instance nmos(test::nmos());
  Circuit c;
  const auto got = c.add(chain(nmos, 3, {0, 2}));
  // in_port 0, out_port 2: instance i's port 0 takes instance i-1's port 2.
  CHECK(net_strings(got[0]) == std::vector<std::string>{"1", "INPUT", "net_1_1", "GND"});
  CHECK(net_strings(got[1]) == std::vector<std::string>{"net_1_1", "INPUT", "net_1_2", "GND"});
  CHECK(net_strings(got[2]) == std::vector<std::string>{"net_1_2", "INPUT", "3", "GND"});
}

TEST_CASE("chain: defaults, identity and placeholders") {
  const Instance x(make_component("x", {"a", "b", "c"}));
  const Manipulation one = chain(x, 1, {0, 1});
  REQUIRE(one.size() == 1);
  CHECK(one[0] == x);

  // Default out_port is the last port.
  const Manipulation m = chain(x, 2);
  CHECK(m[0].nets()[2].is_generated());
  CHECK(m[1].nets()[0] == m[0].nets()[2]);
  CHECK(m[1].nets()[2] == NetRef("c"));
  CHECK(m.group_count() == 1);

  ChainOptions prefixed;
  prefixed.net_prefix = "ro_";
  Circuit c;
  const auto got = c.add(chain(x, 2, prefixed));
  CHECK(got[0].nets()[2] == NetRef("ro_net_1_1"));
}

TEST_CASE("chain: errors") {
  const Instance x(make_component("x", {"a", "b", "c"}));
  CHECK(code_of([&] { chain(x, 3, {0, 0}); }) == Errc::SamePort);
  CHECK(code_of([&] { chain(x, 0); }) == Errc::ZeroLength);
  CHECK(code_of([&] { chain(x, 2, {3, 0}); }) == Errc::PortOutOfRange);
  CHECK(code_of([&] { chain(x, 2, {0, 7}); }) == Errc::PortOutOfRange);
}

TEST_CASE("chain: connectivity is a simple path") {
  for (std::size_t n : {1u, 2u, 5u, 17u}) {
    Circuit c;
    const auto got = c.add(chain(Instance(make_component("seg", {"IN", "OUT"})), n));
    REQUIRE(got.size() == n);
    std::set<std::string> internal;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      CHECK(got[i].nets()[1] == got[i + 1].nets()[0]);
      internal.insert(got[i].nets()[1].str());
    }
    CHECK(internal.size() == n - 1);
    CHECK(got.front().nets()[0] == NetRef("IN"));
    CHECK(got.back().nets()[1] == NetRef("OUT"));
  }
}

TEST_CASE("named chain") {
  auto inv = std::make_shared<const Subcircuit>("INV", std::vector<std::string>{"in", "out"});
  const Instance i = rebind(Instance(inv), {"in_chain", "1"});
  const Manipulation m = named_chain(i, 5, "OUT");
  REQUIRE(m.size() == 5);
  CHECK(m[4].nets()[1] == NetRef("OUT"));
  CHECK(m[0].nets()[0] == NetRef("in_chain"));
  const Manipulation single = named_chain(i, 1, "OUT");
  REQUIRE(single.size() == 1);
  CHECK(single[0].nets() == std::vector<NetRef>{"in_chain", "OUT"});
  CHECK(code_of([&] { named_chain(i, 3, ""); }) == Errc::EmptyOutName);
}

TEST_CASE("array: crossbar") {
  const Instance dev(make_component("device", {"", ""}, {}, "R"));
  const Manipulation arr = array(ArrayShape::grid(3, 3), dev, [](const ArrayCoord& c) {
    return std::vector<NetRef>{"X_" + std::to_string(c.x), "Y_" + std::to_string(c.y)};
  });
  REQUIRE(arr.size() == 9);
  std::set<std::string> nets;
  std::size_t k = 0;
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 3; ++y, ++k) {
      CHECK(net_strings(arr[k]) == std::vector<std::string>{"X_" + std::to_string(x), "Y_" + std::to_string(y)});
      CHECK(*arr[k].context().get("_x") == x);
      CHECK(*arr[k].context().get("_y") == y);
      for (const auto& n : arr[k].nets()) nets.insert(n.str());
    }
  }
  CHECK(nets == std::set<std::string>{"X_0", "X_1", "X_2", "Y_0", "Y_1", "Y_2"});
}

TEST_CASE("array: 1-D, partial nets and errors") {
  const Instance dev(make_component("device", {"a", "b"}));
  const Manipulation line = array(ArrayShape::line(1), dev, [](const ArrayCoord&) { return std::vector<NetRef>{}; });
  REQUIRE(line.size() == 1);
  CHECK(line[0].nets() == dev.nets());
  CHECK(*line[0].context().get("_i") == 0);
  CHECK_FALSE(line[0].context().contains("_x"));

  const Manipulation partial =
      array(ArrayShape::line(4), dev, [](const ArrayCoord& c) { return std::vector<NetRef>{"n" + std::to_string(c.x)}; });
  CHECK(partial[3].nets() == std::vector<NetRef>{"n3", "b"});

  CHECK(code_of([&] {
          array(ArrayShape::grid(2, 2), dev, [](const ArrayCoord&) { return std::vector<NetRef>{1, 2, 3, 4, 5}; });
        }) == Errc::PortFnArity);
  CHECK(code_of([&] { array(ArrayShape::grid(0, 2), dev, [](const ArrayCoord&) { return std::vector<NetRef>{}; }); }) ==
        Errc::InvalidShape);
}

TEST_CASE("inject: boundaries") {
  const Manipulation seven = chain(Instance(test::nmos()), 7, {0, 2});
  Rng rng(1);
  CHECK(inject(seven, 0.0, rng) == seven);
  const Manipulation all = inject(seven, 1.0, rng);
  REQUIRE(all.size() == 14);
  for (std::size_t i = 0; i < 14; i += 2) {
    CHECK(all[i].master() == "Res");
    CHECK(all[i + 1] == seven[i / 2]);
    CHECK(all[i].nets() == std::vector<NetRef>{seven[i / 2].nets().back(), "GND"});
    CHECK(all[i].effective_params().get("R")->number() == 1e4);
  }
  CHECK(code_of([&] { inject(seven, 1.5, rng); }) == Errc::InvalidProbability);
  CHECK(code_of([&] { inject(seven, -0.1, rng); }) == Errc::InvalidProbability);
}

TEST_CASE("inject: custom defect and determinism") {
  const Manipulation kids = parallel(Instance(make_component("seg", {"IN", "OUT"})), 20);
  const Instance leak(make_component("leak", {"", "GND"}, {{"R", 1e6}}));
  Rng a(5), b(5);
  const Manipulation x = inject(kids, 0.5, a, leak);
  const Manipulation y = inject(kids, 0.5, b, leak);
  CHECK(x == y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].master() == "leak") CHECK(x[i].nets() == std::vector<NetRef>{"OUT", "GND"});
  }
}

TEST_CASE("inject: defect count follows Binomial(7, 0.7)") {
  const Manipulation seven = chain(Instance(test::nmos()), 7, {0, 2});
  Rng rng(2024);
  const int trials = 10000;
  double total = 0;
  for (int t = 0; t < trials; ++t) {
    const auto m = inject(seven, 0.7, rng);
    CHECK(m.size() >= 7);
    CHECK(m.size() <= 14);
    total += static_cast<double>(m.size() - 7);
  }
  CHECK(std::fabs(total / trials - 4.9) < 0.1);
}

TEST_CASE("concat") {
  const Instance r(test::resistor());
  CHECK(concat(std::vector<Manipulation>{parallel(r, 2), parallel(r, 3)}).size() == 5);
  CHECK(concat(std::vector<Manipulation>{}).empty());
  Rng rng(4);
  const Manipulation inner = inject(chain(Instance(test::nmos()), 3, {0, 2}), 0.5, rng);
  CHECK(concat(std::vector<Manipulation>{inner}) == inner);
}

TEST_CASE("concat keeps chains apart") {
  const Instance seg(make_component("seg", {"IN", "OUT"}));
  const Manipulation both = concat(std::vector<Manipulation>{chain(seg, 2), chain(seg, 2)});
  CHECK(both.group_count() == 2);
  Circuit c;
  const auto got = c.add(both);
  CHECK(got[0].nets()[1] == NetRef("net_1_1"));
  CHECK(got[2].nets()[1] == NetRef("net_2_1"));
}

TEST_CASE("children can be edited before insertion") {
  Manipulation p = parallel(Instance(test::resistor()), 3);
  p[1] = rebind(p[1], {"a", "b"});
  Circuit c;
  c += p;
  CHECK(c.instances()[1].nets() == std::vector<NetRef>{"a", "b"});
}
