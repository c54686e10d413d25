#include "schrodlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace schrodlab {
namespace {

std::mutex plan_mutex;

struct PlanKey {
  int dim, n, sign;
  bool operator<(const PlanKey& o) const {
    return std::tie(dim, n, sign) < std::tie(o.dim, o.n, o.sign);
  }
};

fftw_plan get_plan(const Grid& g, int sign) {
  static std::map<PlanKey, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  PlanKey key{g.dim, g.n, sign};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  // Dummy buffers just for planning; FFTW_UNALIGNED keeps the plan valid for
  // the new-array execute calls on whatever buffers callers bring.
  std::size_t m = g.size();
  fftw_complex* buf_in = fftw_alloc_complex(m);
  fftw_complex* buf_out = fftw_alloc_complex(m);
  fftw_plan plan;
  if (g.dim == 1) {
    plan = fftw_plan_dft_1d(g.n, buf_in, buf_out, sign,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  } else {
    plan = fftw_plan_dft_2d(g.n, g.n, buf_in, buf_out, sign,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_free(buf_in);
  fftw_free(buf_out);
  if (!plan) throw std::runtime_error("fftw planning failed");
  cache.emplace(key, plan);
  return plan;
}

void execute(const Grid& g, int sign, const cplx* in, cplx* out) {
  if (in == out)
    throw std::invalid_argument("fft: in-place transform not supported");
  fftw_plan plan = get_plan(g, sign);
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void fft_forward(const Grid& g, const cplx* in, cplx* out) {
  execute(g, FFTW_FORWARD, in, out);
}

void fft_inverse(const Grid& g, const cplx* in, cplx* out) {
  execute(g, FFTW_BACKWARD, in, out);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] *= scale;
}

std::vector<cplx> fft_forward(const Grid& g, const std::vector<cplx>& in) {
  std::vector<cplx> out(in.size());
  fft_forward(g, in.data(), out.data());
  return out;
}

std::vector<cplx> fft_inverse(const Grid& g, const std::vector<cplx>& in) {
  std::vector<cplx> out(in.size());
  fft_inverse(g, in.data(), out.data());
  return out;
}

}  // namespace schrodlab
