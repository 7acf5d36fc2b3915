#include "rem/workloads.hpp"

#include <bit>
#include <string>

#include "rem/error.hpp"

namespace rem {

auto gen_fgn(std::size_t n) -> EGraph {
  if (n == 0) throw Error("gen_fgn needs n >= 1");
  EGraph eg;
  eg.intern("g", 1);
  eg.intern("f", 2);
  std::vector<EClassId> constants;
  for (std::size_t i = 1; i <= n; ++i) {
    auto name = std::to_string(i);
    eg.intern(name, 0);
    constants.push_back(eg.add(name));
  }
  std::vector<EClassId> gs;
  for (auto c : constants) gs.push_back(eg.add("g", {c}));
  for (auto g : gs) eg.merge(gs.front(), g);
  eg.rebuild();
  auto G = eg.find(gs.front());

  std::vector<EClassId> fs;
  for (auto c : constants) fs.push_back(eg.add("f", {c, G}));
  for (auto f : fs) eg.merge(fs.front(), f);
  eg.rebuild();
  return eg;
}

auto gen_fd_adversarial(std::size_t n) -> EGraph {
  if (n == 0 || !std::has_single_bit(n)) throw Error("gen_fd_adversarial needs a power of two");
  const auto e = static_cast<std::size_t>(std::countr_zero(n));
  const std::size_t p = std::size_t{1} << (e / 2);
  const std::size_t q = n / p;

  EGraph eg;
  eg.intern("g", 1);
  eg.intern("h", 1);
  eg.intern("f", 2);
  std::vector<EClassId> xs(p);
  std::vector<EClassId> ys(q);
  std::vector<bool> have_x(p, false);
  std::vector<bool> have_y(q, false);
  for (std::size_t j = 0; j < n; ++j) {
    auto name = "a" + std::to_string(j);
    eg.intern(name, 0);
    auto a = eg.add(name);
    auto g = eg.add("g", {a});
    auto h = eg.add("h", {a});
    auto i = j % p;
    auto k = j / p;
    xs[i] = have_x[i] ? eg.merge(xs[i], g) : g;
    ys[k] = have_y[k] ? eg.merge(ys[k], h) : h;
    have_x[i] = have_y[k] = true;
  }
  eg.rebuild();
  for (auto x : xs) {
    for (auto y : ys) eg.add("f", {eg.find(x), eg.find(y)});
  }
  eg.rebuild();
  return eg;
}

}  // namespace rem
