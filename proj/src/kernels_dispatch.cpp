#include <atomic>
#include <cstdlib>
#include <cstring>

#include "xcs/kernels.hpp"

namespace xcs::kernels {

namespace {

std::atomic<const KernelSet*> g_override{nullptr};

const KernelSet* auto_select() {
  if (const char* env = std::getenv("XCS_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    if (std::strcmp(env, "avx2") == 0 && avx2_available())
      return &avx2_kernels();
  }
  return avx2_available() ? &avx2_kernels() : &scalar_kernels();
}

}  // namespace

const KernelSet& active() {
  if (const KernelSet* ks = g_override.load(std::memory_order_relaxed))
    return *ks;
  static const KernelSet* selected = auto_select();
  return *selected;
}

void set_active(const KernelSet* ks) {
  g_override.store(ks, std::memory_order_relaxed);
}

}  // namespace xcs::kernels
