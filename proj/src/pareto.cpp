#include "vmr/pareto.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace vmr {

bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  return a.reliability <= b.reliability && a.electricity <= b.electricity && a.migration <= b.migration;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) { return weakly_dominates(a, b) && !(a == b); }

bool ParetoArchive::insert(const Assignment& a, const ObjectiveVector& o) {
  for (auto& e : entries_) {
    if (e.objectives == o) {
      if (a < e.assignment) e.assignment = a;
      return false;
    }
    if (dominates(e.objectives, o)) return false;
  }
  std::erase_if(entries_, [&o](const ArchiveEntry& e) { return dominates(o, e.objectives); });
  entries_.push_back({a, o});
  return true;
}

void ParetoArchive::merge(const ParetoArchive& other) {
  for (const auto& e : other.entries_) insert(e);
}

std::vector<ObjectiveVector> ParetoArchive::points() const {
  std::vector<ObjectiveVector> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.objectives);
  return out;
}

std::vector<ArchiveEntry> ParetoArchive::canonical() const {
  auto out = entries_;
  std::sort(out.begin(), out.end(), [](const ArchiveEntry& a, const ArchiveEntry& b) { return a.objectives < b.objectives; });
  return out;
}

std::size_t count_solutions(const ParetoArchive& arch) { return arch.size(); }

namespace {

double widen(double worst) { return worst > 0.0 ? worst * 1.1 : worst + 1.0; }

std::string point_text(std::span<const double> p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + format_real(p[i]);
  return s + ")";
}

// Non-dominated 2-D staircase (minimisation) with its dominated area.
class Staircase {
 public:
  Staircase(double ref_x, double ref_y) : ref_x_(ref_x), ref_y_(ref_y) {}

  void insert(double x, double y) {
    if (x >= ref_x_ || y >= ref_y_) return;
    auto it = steps_.upper_bound(x);
    if (it != steps_.begin() && std::prev(it)->second <= y) return;
    // Points at or right of x that are no lower than y are now dominated.
    auto first = steps_.lower_bound(x);
    auto last = first;
    while (last != steps_.end() && last->second >= y) ++last;
    steps_.erase(first, last);
    steps_.emplace(x, y);
  }

  double area() const {
    double total = 0.0;
    for (auto it = steps_.begin(); it != steps_.end(); ++it) {
      const auto next = std::next(it);
      const double right = next == steps_.end() ? ref_x_ : next->first;
      total += (right - it->first) * (ref_y_ - it->second);
    }
    return total;
  }

 private:
  double ref_x_;
  double ref_y_;
  std::map<double, double> steps_;
};

}  // namespace

Point3 reference_point(std::span<const ObjectiveVector> points) {
  if (points.empty()) throw EmptyUnionError("reference point of an empty union");
  Point3 worst = points.front().as_array();
  for (const auto& p : points) {
    for (int i = 0; i < kNumObjectives; ++i) worst[static_cast<std::size_t>(i)] = std::max(worst[static_cast<std::size_t>(i)], p[i]);
  }
  for (auto& c : worst) c = widen(c);
  return worst;
}

Point3 reference_point(std::span<const ParetoArchive> sets) {
  std::vector<ObjectiveVector> all;
  for (const auto& s : sets) {
    const auto pts = s.points();
    all.insert(all.end(), pts.begin(), pts.end());
  }
  return reference_point(all);
}

double hypervolume(std::span<const Point3> points, const Point3& ref) {
  for (const auto& p : points) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (p[i] > ref[i]) throw ReferencePointError("point " + point_text(p) + " exceeds reference point " + point_text(ref));
    }
  }
  std::vector<Point3> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const Point3& a, const Point3& b) { return a[2] < b[2]; });

  // Sweep along the third objective; between consecutive levels the
  // dominated cross-section is the 2-D staircase of the points seen so far.
  Staircase section(ref[0], ref[1]);
  double volume = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    section.insert(sorted[i][0], sorted[i][1]);
    const double next_z = i + 1 < sorted.size() ? sorted[i + 1][2] : ref[2];
    if (next_z > sorted[i][2]) volume += section.area() * (next_z - sorted[i][2]);
  }
  return volume;
}

double hypervolume(const ParetoArchive& front, const Point3& ref) {
  std::vector<Point3> pts;
  pts.reserve(front.size());
  for (const auto& e : front.entries()) pts.push_back(e.objectives.as_array());
  return hypervolume(pts, ref);
}

double hypervolume_2d(std::span<const std::array<double, 2>> points, const std::array<double, 2>& ref) {
  Staircase s(ref[0], ref[1]);
  for (const auto& p : points) {
    if (p[0] > ref[0] || p[1] > ref[1]) {
      throw ReferencePointError("point " + point_text(p) + " exceeds reference point " + point_text(ref));
    }
    s.insert(p[0], p[1]);
  }
  return s.area();
}

void write_archive(std::ostream& out, const ParetoArchive& arch, const std::string& instance_name, const Point3& ref) {
  out << "# vmr-archive\n";
  out << "# instance: " << instance_name << '\n';
  out << "# reference: " << format_real(ref[0]) << ' ' << format_real(ref[1]) << ' ' << format_real(ref[2]) << '\n';
  out << "# columns: reliability electricity migration machine_of_vm...\n";
  for (const auto& e : arch.canonical()) {
    out << format_real(e.objectives.reliability) << '\t' << format_real(e.objectives.electricity) << '\t'
        << format_real(e.objectives.migration);
    for (int m : e.assignment.target) out << '\t' << m;
    out << '\n';
  }
}

ParetoArchive read_archive(std::istream& in) {
  ParetoArchive arch;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> fields;
    for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
    if (fields.size() < 3) throw std::runtime_error("archive line " + std::to_string(number) + ": too few fields");
    auto real = [&](const std::string& f) {
      double x = 0;
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
      if (ec != std::errc{} || p != f.data() + f.size()) {
        throw std::runtime_error("archive line " + std::to_string(number) + ": bad number '" + f + "'");
      }
      return x;
    };
    ObjectiveVector o{real(fields[0]), real(fields[1]), real(fields[2])};
    Assignment a;
    for (std::size_t i = 3; i < fields.size(); ++i) a.target.push_back(static_cast<int>(real(fields[i])));
    arch.insert(a, o);
  }
  return arch;
}

}  // namespace vmr
