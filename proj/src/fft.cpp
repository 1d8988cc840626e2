#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "errors.hpp"

namespace crystalflow::fft {
namespace {

using PlanKey = std::tuple<int, int, Direction>;

// Plans live for the lifetime of the process. fftw_plan creation is not
// thread-safe, execution through the new-array interface is.
class PlanCache {
 public:
  fftw_plan get(const PlanKey& key) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    const auto [dim, n, direction] = key;
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
    auto* scratch = fftw_alloc_complex(total);
    int dims[2] = {n, n};
    const int sign = direction == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = fftw_plan_dft(dim, dims, scratch, scratch, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw InvalidArgument("fftw: unable to create plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(std::span<std::complex<double>> data, int dim, int n,
               Direction direction) {
  if (dim < 1 || dim > 2 || n < 1) throw InvalidArgument("fft: bad shape");
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
  if (data.size() != total) throw InvalidArgument("fft: buffer size mismatch");
  fftw_plan plan = cache().get({dim, n, direction});
  auto* buffer = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buffer, buffer);
}

}  // namespace crystalflow::fft
