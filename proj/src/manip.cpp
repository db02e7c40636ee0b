#include "netforge/manip.hpp"

#include <cmath>

#include "netforge/error.hpp"

namespace netforge {

Manipulation parallel(const Instance& source, std::size_t n) {
  Instance base = source;
  base.set_designator({});
  return Manipulation(std::vector<Instance>(n, base));
}

namespace {

std::size_t resolve_out_port(const Instance& source, const ChainOptions& options) {
  return options.out_port.value_or(source.arity() - 1);
}

void check_chain(const Instance& source, std::size_t n, std::size_t in_port, std::size_t out_port) {
  if (n == 0) throw Error(Errc::ZeroLength, "a chain needs at least one element");
  if (in_port >= source.arity() || out_port >= source.arity()) {
    throw Error(Errc::PortOutOfRange, "chain ports " + std::to_string(in_port) + "/" + std::to_string(out_port) +
                                          " out of range for '" + source.master() + "' with " +
                                          std::to_string(source.arity()) + " ports");
  }
  if (in_port == out_port) throw Error(Errc::SamePort, "chain in_port and out_port must differ");
}

}  // namespace

Manipulation chain(const Instance& source, std::size_t n, const ChainOptions& options) {
  const std::size_t out_port = resolve_out_port(source, options);
  check_chain(source, n, options.in_port, out_port);
  Instance base = source;
  base.set_designator({});
  std::vector<Instance> children(n, base);
  for (std::size_t i = 1; i < n; ++i) {
    NetRef link = NetRef::generated(options.net_prefix, 0, i);
    children[i - 1].set_net(out_port, link);
    children[i].set_net(options.in_port, link);
  }
  return Manipulation(std::move(children), n > 1 ? 1 : 0);
}

Manipulation named_chain(const Instance& source, std::size_t n, const std::string& out_name,
                         const ChainOptions& options) {
  if (out_name.empty()) throw Error(Errc::EmptyOutName, "named_chain needs a non-empty out_name");
  NetRef out_net(out_name);
  Manipulation m = chain(source, n, options);
  m[m.size() - 1].set_net(resolve_out_port(source, options), out_net);
  return m;
}

Manipulation array(const ArrayShape& shape, const Instance& source, const PortFn& port_fn) {
  if (shape.rows == 0 || shape.cols == 0) throw Error(Errc::InvalidShape, "array dimensions must be >= 1");
  if (!shape.two_d && shape.cols != 1) throw Error(Errc::InvalidShape, "1-D arrays have a single column");
  std::vector<Instance> children;
  children.reserve(shape.count());
  for (std::size_t x = 0; x < shape.rows; ++x) {
    for (std::size_t y = 0; y < shape.cols; ++y) {
      Instance inst = source;
      inst.set_designator({});
      const ArrayCoord coord{x, y};
      std::vector<NetRef> nets = port_fn ? port_fn(coord) : std::vector<NetRef>{};
      if (nets.size() > inst.arity()) {
        throw Error(Errc::PortFnArity, "port function returned " + std::to_string(nets.size()) + " nets for '" +
                                           inst.master() + "' with " + std::to_string(inst.arity()) + " ports");
      }
      for (std::size_t p = 0; p < nets.size(); ++p) inst.set_net(p, nets[p]);
      EvalContext ctx = inst.context();
      if (shape.two_d) {
        ctx.set("_x", static_cast<double>(x));
        ctx.set("_y", static_cast<double>(y));
      } else {
        ctx.set("_i", static_cast<double>(x));
      }
      inst.set_context(std::move(ctx));
      children.push_back(std::move(inst));
    }
  }
  return Manipulation(std::move(children));
}

ComponentRef default_defect() {
  static const ComponentRef defect = make_component("Res", {NetRef(), NetRef("GND")}, {{"R", 1e4}}, "R");
  return defect;
}

Manipulation inject(const Manipulation& children, double p, Rng& rng, const std::optional<Instance>& defect) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidProbability, "p must lie in [0, 1]");
  const Instance base = defect ? *defect : Instance(default_defect());
  std::vector<Instance> out;
  out.reserve(children.size() * 2);
  for (const Instance& child : children) {
    // u < p: p = 0 never fires, p = 1 always does.
    if (rng.uniform() < p) {
      Instance d = base;
      d.set_designator({});
      d.set_net(0, child.nets().back());
      if (d.arity() > 1) d.set_net(1, NetRef("GND"));
      out.push_back(std::move(d));
    }
    out.push_back(child);
  }
  return Manipulation(std::move(out), children.group_count());
}

Manipulation concat(std::span<const Manipulation> parts) {
  std::vector<Instance> out;
  std::uint64_t offset = 0;
  for (const Manipulation& part : parts) {
    for (Instance inst : part) {
      for (std::size_t p = 0; p < inst.arity(); ++p) {
        const NetRef& net = inst.nets()[p];
        if (net.is_generated()) inst.set_net(p, NetRef::generated(net.name(), net.number() + offset, net.link()));
      }
      out.push_back(std::move(inst));
    }
    offset += part.group_count();
  }
  return Manipulation(std::move(out), offset);
}

}  // namespace netforge
