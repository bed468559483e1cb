#include "walklocus/lattice.hpp"

#include <cassert>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "walklocus/error.hpp"

namespace walklocus {

LatticePoint::LatticePoint(std::vector<Coord> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw ConfigError("lattice point needs dimension >= 1");
}

LatticePoint::LatticePoint(std::span<const Coord> coords)
    : LatticePoint(std::vector<Coord>(coords.begin(), coords.end())) {}

LatticePoint LatticePoint::origin(int dim) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  return LatticePoint(std::vector<Coord>(static_cast<std::size_t>(dim), 0));
}

namespace {

Coord checked_add(Coord a, Coord b) {
  Coord out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("lattice coordinate overflow");
  return out;
}

void require_same_dim(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim() != b.dim()) throw ConfigError("lattice points of different dimensions");
}

}  // namespace

LatticePoint LatticePoint::operator+(const LatticePoint& other) const {
  require_same_dim(*this, other);
  std::vector<Coord> out(coords_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = checked_add(coords_[i], other.coords_[i]);
  return LatticePoint(std::move(out));
}

LatticePoint LatticePoint::operator-(const LatticePoint& other) const {
  require_same_dim(*this, other);
  std::vector<Coord> out(coords_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (__builtin_sub_overflow(coords_[i], other.coords_[i], &out[i]))
      throw std::overflow_error("lattice coordinate overflow");
  }
  return LatticePoint(std::move(out));
}

Coord LatticePoint::l1_norm() const {
  Coord sum = 0;
  for (Coord c : coords_) sum = checked_add(sum, c < 0 ? -c : c);
  return sum;
}

std::string LatticePoint::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out << ',';
    out << coords_[i];
  }
  return out.str();
}

LatticePoint LatticePoint::parse(const std::string& text) {
  std::vector<Coord> coords;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad coordinate '" + item + "' in point '" + text + "'");
    }
    while (used < item.size() && item[used] == ' ') ++used;
    if (used != item.size()) throw ConfigError("bad coordinate '" + item + "' in point '" + text + "'");
    coords.push_back(v);
  }
  if (coords.empty()) throw ConfigError("empty point '" + text + "'");
  return LatticePoint(std::move(coords));
}

StepSequence::StepSequence(int dim, std::vector<Step> steps) : dim_(dim), steps_(std::move(steps)) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  for (const Step& s : steps_) {
    if (s.axis >= dim || (s.sign != 1 && s.sign != -1)) throw ConfigError("step outside E_+-");
  }
}

Walk::Walk(LatticePoint start, StepSequence steps)
    : dim_(start.dim()), start_(std::move(start)), steps_(std::move(steps)) {
  if (steps_.dim() != dim_) throw ConfigError("walk start and steps differ in dimension");
  const auto d = static_cast<std::size_t>(dim_);
  positions_.resize((steps_.size() + 1) * d);
  for (std::size_t a = 0; a < d; ++a) positions_[a] = start_[static_cast<int>(a)];
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    const Coord* prev = positions_.data() + k * d;
    Coord* next = positions_.data() + (k + 1) * d;
    for (std::size_t a = 0; a < d; ++a) next[a] = prev[a];
    const Step s = steps_[k];
    // n <= 2^62 steps from a bounded start cannot overflow.
    assert(std::abs(next[s.axis]) < std::numeric_limits<Coord>::max() - 1);
    next[s.axis] += s.sign;
  }
}

StepSequence generate_steps(int dim, std::size_t n, Stream& stream) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  if (dim > 127) throw ConfigError("dimension must be <= 127");
  const auto choices = static_cast<std::uint32_t>(2 * dim);
  std::vector<Step> steps(n);
  for (auto& s : steps) s = Step::from_code(stream.below(choices));
  return StepSequence(dim, std::move(steps));
}

Walk generate_walk(int dim, std::size_t n, Stream& stream, std::size_t memory_budget) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  const std::size_t row = static_cast<std::size_t>(dim) * sizeof(Coord);
  if (n >= memory_budget / row) throw BudgetExceeded("walk of " + std::to_string(n) +
                                                     " steps exceeds the memory budget");
  return Walk(LatticePoint::origin(dim), generate_steps(dim, n, stream));
}

Walk generate_walk(int dim, std::size_t n, std::uint64_t seed, std::size_t memory_budget) {
  Stream stream = replicate_stream(seed, 0);
  return generate_walk(dim, n, stream, memory_budget);
}

std::vector<LatticePoint> neighbors(const LatticePoint& p) {
  std::vector<LatticePoint> out;
  out.reserve(static_cast<std::size_t>(2 * p.dim()));
  std::vector<Coord> c(p.coords().begin(), p.coords().end());
  for (std::size_t a = 0; a < c.size(); ++a) {
    const Coord base = c[a];
    c[a] = checked_add(base, 1);
    out.emplace_back(c);
    c[a] = checked_add(base, -1);
    out.emplace_back(c);
    c[a] = base;
  }
  return out;
}

TwoSidedWalk generate_two_sided(int dim, std::size_t back_steps, std::size_t forward_steps,
                                Stream& stream) {
  Stream fwd = stream.split(1);
  Stream back = stream.split(2);
  return TwoSidedWalk{generate_walk(dim, forward_steps, fwd), generate_walk(dim, back_steps, back)};
}

}  // namespace walklocus
