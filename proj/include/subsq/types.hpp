#ifndef SUBSQ_TYPES_HPP
#define SUBSQ_TYPES_HPP

#include <random>
#include <string_view>

#include "subsq/interval_matrix.hpp"

namespace subsq {

// The solver layer works in double precision.
using Ival = Interval<double>;
using IMatrix = IntervalMatrix<double>;
using IVector = IntervalVector<double>;
using Matrix = PointMatrix<double>;
using Vector = PointVector<double>;

/// One seeded engine drives every random choice in a run.
using Rng = std::mt19937_64;

enum class Status { Enclosure, ProvenUnsolvable, Inconclusive };

constexpr std::string_view to_string(Status s) {
  switch (s) {
    case Status::Enclosure: return "Enclosure";
    case Status::ProvenUnsolvable: return "ProvenUnsolvable";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

}  // namespace subsq

#endif  // SUBSQ_TYPES_HPP
