// include/listen/nn/parallel.hpp

// Copyright 2026  The listen authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef LISTEN_NN_PARALLEL_HPP_
#define LISTEN_NN_PARALLEL_HPP_

namespace listen::nn {

// Worker count for op kernels. Kernels split work over independent output
// slices (batch items, channels), so every output element is produced by
// exactly one worker and results do not depend on the count.
void set_num_threads(int n);
int num_threads();

}  // namespace listen::nn

#endif  // LISTEN_NN_PARALLEL_HPP_
