#pragma once

#include <functional>
#include <optional>
#include <span>

#include "omq/model.hpp"

namespace omq {

/// Receives each homomorphism found; returning false stops the search.
using HomomorphismVisitor = std::function<bool(const Substitution&)>;

/// Enumerates the homomorphisms from `atoms` into `target` that extend
/// `seed`. Constants and nulls in `atoms` map to themselves. Atoms are
/// matched most-constrained first, using the instance's position index.
void for_each_homomorphism(std::span<const Atom> atoms, const Instance& target,
                           const Substitution& seed,
                           const HomomorphismVisitor& visit);

std::optional<Substitution> find_homomorphism(std::span<const Atom> atoms,
                                              const Instance& target,
                                              const Substitution& seed = {});

bool has_homomorphism(std::span<const Atom> atoms, const Instance& target,
                      const Substitution& seed = {});

}  // namespace omq
