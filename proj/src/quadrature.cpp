#include "qmlab/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "qmlab/errors.hpp"

namespace qmlab {

namespace {

GaussLegendre compute_gauss_legendre(int order) {
  GaussLegendre rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_order(x) and its derivative.
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= order; ++m) {
        double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

namespace {

template <class T>
T pairwise_sum_impl(const T* values, std::size_t count) {
  if (count <= 8) {
    T total{};
    for (std::size_t i = 0; i < count; ++i) total += values[i];
    return total;
  }
  std::size_t half = count / 2;
  return pairwise_sum_impl(values, half) + pairwise_sum_impl(values + half, count - half);
}

}  // namespace

double pairwise_sum(const double* values, std::size_t count) {
  return pairwise_sum_impl(values, count);
}

std::complex<double> pairwise_sum(const std::complex<double>* values, std::size_t count) {
  return pairwise_sum_impl(values, count);
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads < 1) threads = 1;
  const std::size_t block = 64;
  if (threads == 1 || count <= block) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::size_t blocks = (count + block - 1) / block;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      std::size_t begin = b * block;
      std::size_t end = std::min(count, begin + block);
      for (std::size_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace qmlab
