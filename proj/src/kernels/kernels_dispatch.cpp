#include <cstdlib>
#include <stdexcept>
#include <string>

#include "confed/kernels.hpp"

#ifndef CONFED_HAVE_AVX2
#define CONFED_HAVE_AVX2 0
#endif

namespace confed::kernels {
namespace {

bool cpu_has_avx2() {
#if CONFED_HAVE_AVX2 && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* avx2_or_null() {
#if CONFED_HAVE_AVX2
  if (cpu_has_avx2()) return detail::avx2_ops_if_compiled();
#endif
  return nullptr;
}

const Ops* resolve_auto() {
  if (const char* env = std::getenv("CONFED_SIMD")) {
    std::string want(env);
    if (want == "scalar") return &detail::scalar_ops();
    if (want == "avx2") {
      if (const Ops* v = avx2_or_null()) return v;
      // Requested backend unavailable on this machine: fall through to auto.
    }
  }
  if (const Ops* v = avx2_or_null()) return v;
  return &detail::scalar_ops();
}

const Ops*& active_slot() {
  static const Ops* active = resolve_auto();
  return active;
}

}  // namespace

const Ops& ops() { return *active_slot(); }

void force_backend(const std::string& name) {
  if (name == "auto") {
    active_slot() = resolve_auto();
    return;
  }
  if (name == "scalar") {
    active_slot() = &detail::scalar_ops();
    return;
  }
  if (name == "avx2") {
    if (const Ops* v = avx2_or_null()) {
      active_slot() = v;
      return;
    }
    throw std::invalid_argument("kernels: avx2 backend unavailable on this cpu/build");
  }
  throw std::invalid_argument("kernels: unknown backend '" + name + "'");
}

std::vector<std::string> available_backends() {
  std::vector<std::string> out = {"scalar"};
  if (avx2_or_null()) out.emplace_back("avx2");
  return out;
}

}  // namespace confed::kernels
