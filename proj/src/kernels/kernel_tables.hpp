#pragma once

#include "alignkit/kernels.hpp"

namespace alignkit::kernels::detail {

const KernelTable& scalar_table();
#if defined(ALIGNKIT_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace alignkit::kernels::detail
