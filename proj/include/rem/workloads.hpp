#pragma once

#include <cstddef>

#include "rem/egraph.hpp"

namespace rem {

/**
 * Constants 1..n, every g(i) merged into one class G, and every f(i, G)
 * merged into one class F. Rebuilt; 3n e-nodes in n + 2 classes.
 */
auto gen_fgn(std::size_t n) -> EGraph;

/**
 * Instance for (f (g ?a) (h ?a)) where every relation has n tuples and a
 * badly ordered join does about n^1.5 work. n = p*q with p, q powers of two
 * as equal as possible. Constant a_j sits under g in class X_(j mod p) and
 * under h in class Y_(j div p); f(X_i, Y_k) exists for every i, k, so each
 * f-node has exactly one match. Throws Error unless n is a power of two.
 */
auto gen_fd_adversarial(std::size_t n) -> EGraph;

}  // namespace rem
