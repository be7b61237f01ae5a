#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace qmlab {

// Gauss-Legendre rule on [-1, 1].  Nodes are computed once per order by
// Newton iteration and cached; the table is immutable after creation.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int order);

// Summation with a fixed pairwise tree: the result depends only on the array
// contents and order, never on chunking or thread count.
double pairwise_sum(const double* values, std::size_t count);
std::complex<double> pairwise_sum(const std::complex<double>* values, std::size_t count);

// Runs fn(i) for i in [0, count).  Work is handed out in fixed-size blocks
// via an atomic counter; fn must only write to per-index slots, which keeps
// results identical for any thread count.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace qmlab
