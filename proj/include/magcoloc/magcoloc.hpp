// Copyright 2026 The magcoloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MAGCOLOC_MAGCOLOC_HPP_
#define MAGCOLOC_MAGCOLOC_HPP_

#include "magcoloc/alignment.hpp"
#include "magcoloc/error.hpp"
#include "magcoloc/io.hpp"
#include "magcoloc/matching.hpp"
#include "magcoloc/model.hpp"
#include "magcoloc/segmentation.hpp"
#include "magcoloc/signal.hpp"
#include "magcoloc/synth.hpp"

#endif  // MAGCOLOC_MAGCOLOC_HPP_
