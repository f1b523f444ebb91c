#include "morphkit/distmat.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "morphkit/errors.hpp"

namespace morphkit {
namespace {

std::string provenance_key(const std::vector<std::string>& ids,
                           const std::string& method,
                           const std::map<std::string, std::string>& params) {
  // FNV-1a over the identifying strings.
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const std::string& s) {
    for (const unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  mix(method);
  for (const auto& [k, v] : params) {
    mix(k);
    mix(v);
  }
  for (const auto& id : ids) mix(id);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

void validate(const DistanceMatrix& dm, double sym_tol) {
  for (int i = 0; i < dm.size; ++i) {
    if (dm.at(i, i) != 0.0)
      raise(ErrorCode::invalid_argument, "distance matrix diagonal not zero");
    for (int j = 0; j < dm.size; ++j) {
      const double v = dm.at(i, j);
      if (!std::isfinite(v) || v < 0.0)
        raise(ErrorCode::invalid_argument, "distance matrix entry invalid");
      if (std::abs(v - dm.at(j, i)) > sym_tol)
        raise(ErrorCode::invalid_argument, "distance matrix not symmetric");
    }
  }
}

DistanceMatrix compute_distance_matrix(
    const std::vector<std::string>& ids,
    const std::function<double(int, int)>& pair_fn, const std::string& method,
    const std::map<std::string, std::string>& params,
    const DistmatOptions& opts) {
  const int n = static_cast<int>(ids.size());
  DistanceMatrix dm;
  dm.size = n;
  dm.ids = ids;
  dm.method = method;
  dm.params = params;
  dm.entries.assign(static_cast<size_t>(n) * n, 0.0);

  // Upper-triangle cells in row-major order.
  struct Cell { int i, j; };
  std::vector<Cell> cells;
  cells.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) cells.push_back({i, j});

  std::vector<char> done(cells.size(), 0);
  const std::string key = provenance_key(ids, method, params);

  // Resume from a checkpoint if one matches.
  if (!opts.checkpoint_path.empty() &&
      std::filesystem::exists(opts.checkpoint_path)) {
    std::ifstream in(opts.checkpoint_path);
    std::string magic, file_key;
    if (in >> magic >> file_key && magic == "morphkit-distmat-v1" &&
        file_key == key) {
      int i, j;
      double v;
      while (in >> i >> j >> v) {
        if (i < 0 || j <= i || j >= n) continue;
        dm.at(i, j) = v;
        dm.at(j, i) = v;
        // Locate the cell index: cells are ordered by (i, j).
        const size_t base = static_cast<size_t>(i) * (2 * n - i - 1) / 2;
        done[base + (j - i - 1)] = 1;
      }
    }
  }

  std::atomic<size_t> cursor{0};
  std::atomic<size_t> completed{0};
  std::mutex checkpoint_mu;
  size_t last_flush = 0;
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto flush_checkpoint = [&]() {
    if (opts.checkpoint_path.empty()) return;
    const std::string tmp = opts.checkpoint_path + ".tmp";
    {
      std::ofstream out(tmp);
      out << "morphkit-distmat-v1 " << key << "\n";
      out.precision(17);
      for (size_t c = 0; c < cells.size(); ++c)
        if (done[c])
          out << cells[c].i << " " << cells[c].j << " "
              << dm.at(cells[c].i, cells[c].j) << "\n";
    }
    std::filesystem::rename(tmp, opts.checkpoint_path);
  };

  auto worker = [&]() {
    while (true) {
      const size_t c = cursor.fetch_add(1);
      if (c >= cells.size()) return;
      if (done[c]) continue;
      if (first_error) return;
      try {
        const double v = pair_fn(cells[c].i, cells[c].j);
        dm.at(cells[c].i, cells[c].j) = v;
        dm.at(cells[c].j, cells[c].i) = v;
        done[c] = 1;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
      const size_t total = completed.fetch_add(1) + 1;
      if (!opts.checkpoint_path.empty() &&
          total >= last_flush + static_cast<size_t>(opts.checkpoint_every)) {
        std::lock_guard<std::mutex> lock(checkpoint_mu);
        if (total >= last_flush + static_cast<size_t>(opts.checkpoint_every)) {
          last_flush = total;
          flush_checkpoint();
        }
      }
    }
  };

  int jobs = opts.jobs > 0 ? opts.jobs
                           : static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  jobs = std::min<int>(jobs, std::max<size_t>(cells.size(), 1));

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Finished: the checkpoint is no longer needed.
  if (!opts.checkpoint_path.empty() &&
      std::filesystem::exists(opts.checkpoint_path)) {
    std::error_code ec;
    std::filesystem::remove(opts.checkpoint_path, ec);
  }
  return dm;
}

}  // namespace morphkit
