#pragma once

#include "sparseopt/kernels.hpp"

namespace sparseopt::kernels::detail {

#if defined(SPARSEOPT_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif

}  // namespace sparseopt::kernels::detail
