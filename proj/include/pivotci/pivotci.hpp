/*
 * Copyright 2026 The pivotci Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PIVOTCI_PIVOTCI_HPP_
#define PIVOTCI_PIVOTCI_HPP_

#include "pivotci/censoring.hpp"
#include "pivotci/conditional_cdf.hpp"
#include "pivotci/families.hpp"
#include "pivotci/gamma_kernel.hpp"
#include "pivotci/io.hpp"
#include "pivotci/pivot.hpp"
#include "pivotci/random.hpp"
#include "pivotci/simulation.hpp"
#include "pivotci/summation.hpp"

#endif // PIVOTCI_PIVOTCI_HPP_
