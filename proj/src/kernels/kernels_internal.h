// src/kernels/kernels_internal.h

// Copyright 2026 The taog Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//  http://www.apache.org/licenses/LICENSE-2.0

// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TAOG_SRC_KERNELS_INTERNAL_H_
#define TAOG_SRC_KERNELS_INTERNAL_H_

#include "taog/kernels.h"

namespace taog::kernels::internal {

extern const KernelTable kScalarTable;
#if defined(TAOG_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace taog::kernels::internal

#endif  // TAOG_SRC_KERNELS_INTERNAL_H_
