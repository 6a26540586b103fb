#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vmr/instance.hpp"
#include "vmr/objectives.hpp"

namespace vmr {

/// Minimisation dominance: a <= b everywhere and a < b somewhere.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);
bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b);

struct ArchiveEntry {
  Assignment assignment;
  ObjectiveVector objectives;

  bool operator==(const ArchiveEntry&) const = default;
};

/// Mutually non-dominated set of solutions without duplicate objective vectors.
///
/// The content depends only on the set of entries offered, never on their
/// order: when two assignments share an objective vector the lexicographically
/// smallest one is kept. This makes merge() associative, commutative and
/// idempotent.
class ParetoArchive {
 public:
  ParetoArchive() = default;

  /// Returns true when the objective vector was new and non-dominated.
  bool insert(const Assignment& a, const ObjectiveVector& o);
  bool insert(const ArchiveEntry& e) { return insert(e.assignment, e.objectives); }

  void merge(const ParetoArchive& other);

  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::vector<ObjectiveVector> points() const;

  /// Entries sorted by objective vector; equal archives compare equal.
  std::vector<ArchiveEntry> canonical() const;

 private:
  std::vector<ArchiveEntry> entries_;
};

std::size_t count_solutions(const ParetoArchive& arch);

using Point3 = std::array<double, 3>;

class EmptyUnionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ReferencePointError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Component-wise maximum over all sets, scaled by 1.1; zero components
/// become 1.0. Throws EmptyUnionError if every set is empty.
Point3 reference_point(std::span<const ParetoArchive> sets);
Point3 reference_point(std::span<const ObjectiveVector> points);

/// Exact volume dominated by `points` and bounded by `ref` (3 objectives).
/// Throws ReferencePointError when some point exceeds `ref`.
double hypervolume(std::span<const Point3> points, const Point3& ref);
double hypervolume(const ParetoArchive& front, const Point3& ref);

/// Two-objective variant.
double hypervolume_2d(std::span<const std::array<double, 2>> points, const std::array<double, 2>& ref);

/// Tab-separated archive file: '#' header lines with instance name and
/// reference point, then one line per entry with the objective triple followed
/// by the machine index of every VM.
void write_archive(std::ostream& out, const ParetoArchive& arch, const std::string& instance_name,
                   const Point3& ref);
ParetoArchive read_archive(std::istream& in);

}  // namespace vmr
