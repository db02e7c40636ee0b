#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "netforge/core.hpp"
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

}  // namespace

TEST_CASE("net refs") {
  CHECK(NetRef("1") == NetRef(1));
  CHECK(NetRef("007").kind() == NetRef::Kind::Numbered);
  CHECK(NetRef("007").str() == "7");
  CHECK(NetRef("").is_unconnected());
  CHECK(NetRef("INPUT").kind() == NetRef::Kind::Named);
  CHECK(NetRef("X_0.a").str() == "X_0.a");
  CHECK(NetRef("INPUT") != NetRef("input"));
  CHECK(code_of([] { NetRef("1abc"); }) == Errc::InvalidNetName);
  CHECK(code_of([] { NetRef("a b"); }) == Errc::InvalidNetName);
  CHECK(code_of([] { NetRef(-1); }) == Errc::InvalidNetName);
  CHECK(is_valid_net_name("_x9"));
  CHECK_FALSE(is_valid_net_name("9x"));
  CHECK(is_global(NetRef(0), {"0", "GND"}));
  CHECK(is_global(NetRef("GND"), {"0", "GND"}));
  CHECK_FALSE(is_global(NetRef("gnd"), {"0", "GND"}));
}

TEST_CASE("component creation") {
  const Component cap("Cap", {0, 1}, {{"C", 1e-12}}, "C");
  CHECK(cap.ports().size() == 2);
  CHECK(cap.prefix() == "C");

  const Component nmos("nmos", {1, "INPUT", 3, "GND"});
  CHECK(nmos.ports().size() == 4);
  CHECK(nmos.prefix() == "N");
  CHECK(nmos.ports()[1] == NetRef("INPUT"));

  CHECK(Component("2res", {1}).prefix() == "R");
  CHECK(Component("42", {1}).prefix() == "X");
  CHECK(Component("v", {1}, {}, "").prefix() == "V");

  CHECK(code_of([] { Component("X", {}); }) == Errc::EmptyPorts);
  CHECK(code_of([] { Component("", {1}); }) == Errc::EmptyName);
}

TEST_CASE("rebind") {
  auto inv = std::make_shared<const Subcircuit>("INV", std::vector<std::string>{"in", "out"});
  const Instance i = rebind(Instance(inv), {"in_chain", "1"});
  CHECK(i.nets() == std::vector<NetRef>{"in_chain", 1});
  CHECK(i.master() == "INV");
  CHECK(inv->pins() == std::vector<std::string>{"in", "out"});

  const Instance base(test::resistor());
  CHECK(rebind(base, base.nets()) == base);
  CHECK(code_of([&] { rebind(base, std::vector<NetRef>{1, 2, 3}); }) == Errc::ArityMismatch);

  // Single-net form: first Unconnected port, else port 0.
  auto defect = make_component("Res", {"", "GND"}, {{"R", 1e4}});
  CHECK(rebind(Instance(defect), NetRef("N7")).nets() == std::vector<NetRef>{"N7", "GND"});
  auto mid = make_component("m", {"a", "", ""});
  CHECK(rebind(Instance(mid), NetRef("z")).nets() == std::vector<NetRef>{"a", "z", ""});
  CHECK(rebind(base, NetRef("q")).nets() == std::vector<NetRef>{"q", "GND"});

  // Defect wired to a component's last port.
  const Instance comp = rebind(Instance(test::nmos()), {1, "INPUT", "n9", "GND"});
  CHECK(rebind(Instance(defect), {comp.nets().back(), "GND"}).nets() == std::vector<NetRef>{"GND", "GND"});
}

TEST_CASE("override params") {
  auto cap = make_component("Cap", {0, 1}, {{"C", 2e-12}, {"m", 1}}, "C");
  const Instance a = Instance(cap) % Params{{"C", 1e-12}};
  CHECK(a.effective_params().get("C")->number() == 1e-12);
  CHECK(a.effective_params().get("m")->number() == 1);
  CHECK((Instance(cap) % Params{}).effective_params() == cap->params());
  CHECK(cap->params().get("C")->number() == 2e-12);

  auto nmos = make_component("NMOS", {"d", "g", "s", "b"}, {{"w", 0.135}, {"l", 0.045}});
  const Params expected{{"w", 0.27}, {"l", 0.045}};
  const Params got = (Instance(nmos) % Params{{"w", 0.27}}).effective_params();
  REQUIRE(got.size() == expected.size());
  for (const auto& [k, v] : expected) CHECK(*got.get(k) == v);

  // Unknown keys extend the map.
  CHECK((Instance(nmos) % Params{{"m", 4}}).effective_params().keys() == std::vector<std::string>{"w", "l", "m"});
}

TEST_CASE("rebind and override commute; templates stay unchanged") {
  auto nmos = test::nmos();
  const Component snapshot = *nmos;
  const Instance base(nmos);
  const std::vector<NetRef> nets{"d", "g", "s", "b"};
  const Params p{{"w", 1.0}, {"extra", "x"}};
  const Instance ab = override_params(rebind(base, nets), p);
  const Instance ba = rebind(override_params(base, p), nets);
  CHECK(ab.nets() == ba.nets());
  CHECK(ab.effective_params() == ba.effective_params());
  CHECK(ab == ba);
  CHECK(*nmos == snapshot);
}

TEST_CASE("designators per prefix") {
  Circuit c;
  const Instance r(test::resistor());
  c += r;
  c += Instance(test::nmos());
  c += r;
  c += r;
  std::vector<std::string> got;
  for (const auto& inst : c.instances()) got.push_back(inst.designator());

  // Oracle: simulate per-prefix counters.
  std::map<std::string, int> counters;
  std::vector<std::string> expected;
  for (const char* p : {"R", "M", "R", "R"}) expected.push_back(p + std::to_string(++counters[p]));
  CHECK(got == expected);
  CHECK(got == std::vector<std::string>{"R1", "M1", "R2", "R3"});
}

TEST_CASE("designators are deterministic and never reused") {
  auto build = [] {
    Circuit c;
    c += parallel(Instance(test::resistor()), 3);
    c += chain(Instance(test::nmos()), 2, {0, 2});
    return c;
  };
  const Circuit a = build(), b = build();
  CHECK(a == b);

  Circuit c;
  c += parallel(Instance(test::resistor()), 0);
  CHECK(c.instances().empty());
  CHECK(c.scope().counters().empty());
}

TEST_CASE("add returns stored instances and resolves generated nets") {
  Circuit c;
  const auto stored = c.add(chain(Instance(test::nmos()), 3, {0, 2}));
  REQUIRE(stored.size() == 3);
  CHECK(stored[0].designator() == "M1");
  CHECK(stored[0].nets()[2] == NetRef("net_1_1"));
  CHECK(stored[1].nets()[0] == NetRef("net_1_1"));
  CHECK(stored[1].nets()[2] == NetRef("net_1_2"));
  CHECK(stored[2].nets()[0] == NetRef("net_1_2"));
  CHECK(stored == c.instances());

  // A second chain gets the next counter value.
  const auto more = c.add(chain(Instance(test::nmos()), 2, {0, 2}));
  CHECK(more[0].nets()[2] == NetRef("net_2_1"));
  CHECK(c.scope().chain_counter() == 2);
}

TEST_CASE("models and subcircuit definitions are unique") {
  Circuit c;
  c += Model("custom_nmos", "nmos", {{"TYPE", 1}});
  CHECK(code_of([&] { c += Model("custom_nmos", "nmos"); }) == Errc::DuplicateModelName);
  CHECK(c.models().size() == 1);

  Subcircuit a("A", {"x"});
  c += a;
  CHECK(code_of([&] { c += a; }) == Errc::DuplicateSubcircuitName);

  // Instances register their definition; identical definitions are fine.
  Circuit d;
  d += Instance(a);
  d += Instance(a);
  CHECK(d.subcircuits().size() == 1);
  Subcircuit other("A", {"x", "y"});
  const auto before = d;
  CHECK(code_of([&] { d += Instance(other); }) == Errc::DuplicateSubcircuitName);
  CHECK(d == before);
}

TEST_CASE("subcircuit instances use prefix X") {
  auto s = std::make_shared<const Subcircuit>("RO", std::vector<std::string>{"a", "b"});
  Circuit c;
  c += Instance(s);
  c += Instance(s);
  CHECK(c.instances()[1].designator() == "X2");
}

TEST_CASE("subcircuit pins and fixing") {
  CHECK(code_of([] { Subcircuit("S", {"a", "a"}); }) == Errc::DuplicatePins);
  CHECK(code_of([] { Subcircuit("", {"a"}); }) == Errc::EmptyName);
  CHECK(code_of([] { Subcircuit("S", {"1a"}); }) == Errc::InvalidNetName);

  Subcircuit s("S", {"a", "b"});
  s += Instance(test::resistor({"a", "b"}));
  CHECK(s.body().size() == 1);
  s.fix();
  s.fix();
  CHECK(s.fixed());
  CHECK(code_of([&] { s += Instance(test::resistor()); }) == Errc::SubcircuitFrozen);
  CHECK(code_of([&] { s.add(Subcircuit("T", {"q"})); }) == Errc::SubcircuitFrozen);
  CHECK(s.body().size() == 1);
}

TEST_CASE("into_subckt") {
  Circuit chain_c;
  auto inv = std::make_shared<const Subcircuit>("INV", std::vector<std::string>{"in", "out"});
  chain_c += named_chain(rebind(Instance(inv), {"in_chain", "1"}), 5, "OUT");
  const Subcircuit ro = chain_c.into_subckt("RO_CHAIN", {"in_chain", "OUT"});
  CHECK(ro.pins().size() == 2);
  CHECK(ro.body().size() == 5);
  CHECK(ro.nested().contains("INV"));
  CHECK(ro.body().back().nets().back() == NetRef("OUT"));
  // Original circuit remains usable.
  CHECK(chain_c.instances().size() == 5);
  chain_c += Instance(test::resistor());
  CHECK(ro.body().size() == 5);

  const Subcircuit empty = Circuit().into_subckt("E", {"p"});
  CHECK(empty.body().empty());
  CHECK(code_of([] { Circuit().into_subckt("E", {"a", "a"}); }) == Errc::DuplicatePins);
}

TEST_CASE("default globals") {
  const Circuit c;
  CHECK(c.globals() == std::set<std::string>{"0", "GND", "VDD"});
}
