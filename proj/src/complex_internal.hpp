#pragma once

#include "floation/complex.hpp"

namespace flo::detail {

struct Presentation {
    std::vector<Word> edge_words;
    std::vector<Word> relators;
    AbelianGroupShape h1;
};

/// Express every edge class in the basis by solving relations that contain exactly
/// one unresolved class once; whatever remains becomes the relator list.
Presentation solve_presentation(const GeneratorSet& edges, const std::vector<std::size_t>& basis_edge,
                                const std::vector<Word>& relations);

}  // namespace flo::detail
