// Copyright 2026 The Cocite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Static SVG renderings of the reconcile matrices.

#ifndef COCITE_RENDER_HPP_
#define COCITE_RENDER_HPP_

#include <string>

#include "cocite/corpus.hpp"
#include "cocite/reconcile.hpp"

namespace cocite {

// Grid of cells shaded white -> dark blue by share; rows are minor areas.
std::string render_heatmap_svg(const LabelShareMatrix& matrix, const LabelTaxonomy& taxonomy,
                               const std::string& title);

// Circles sized by percentage for every shown cell of the cross map.
std::string render_dotplot_svg(const CrossMap& map, const std::string& title);

}  // namespace cocite

#endif  // COCITE_RENDER_HPP_
