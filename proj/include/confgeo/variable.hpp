#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace confgeo {

/// Largest system dimension the packed monomial layout supports.
inline constexpr int kMaxDimension = 10;

/// Number of jet coordinate slots: x, y1..y10, p1..p10, q1..q10.
inline constexpr int kSlotCount = 3 * kMaxDimension + 1;

enum class VarKind : std::uint8_t { X, Y, P, Q };

/// A jet coordinate: x, y_i, p_i = y_i' or q_i = y_i''.
///
/// Indices are 1-based to match the conventional notation. Each variable
/// maps to a fixed slot independent of the system dimension, so that the
/// slot order x < y1 < ... < p1 < ... < q1 < ... is the canonical variable
/// order for every m.
class VarId {
 public:
  static VarId x() { return VarId(VarKind::X, 0); }
  static VarId y(int i) { return VarId(VarKind::Y, i); }
  static VarId p(int i) { return VarId(VarKind::P, i); }
  static VarId q(int i) { return VarId(VarKind::Q, i); }
  static VarId from_slot(int slot);

  VarKind kind() const { return kind_; }
  int index() const { return index_; }
  int slot() const;
  std::string name() const;

  friend bool operator==(const VarId&, const VarId&) = default;
  friend auto operator<=>(const VarId& a, const VarId& b) { return a.slot() <=> b.slot(); }

 private:
  VarId(VarKind kind, int index);

  VarKind kind_;
  int index_;
};

}  // namespace confgeo
