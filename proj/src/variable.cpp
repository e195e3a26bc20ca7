#include "confgeo/variable.hpp"

#include <stdexcept>

namespace confgeo {

VarId::VarId(VarKind kind, int index) : kind_(kind), index_(index) {
  if (kind == VarKind::X) {
    if (index != 0) throw std::invalid_argument("x carries no index");
  } else if (index < 1 || index > kMaxDimension) {
    throw std::out_of_range("jet variable index " + std::to_string(index) +
                            " outside 1.." + std::to_string(kMaxDimension));
  }
}

VarId VarId::from_slot(int slot) {
  if (slot == 0) return x();
  if (slot < 0 || slot >= kSlotCount) throw std::out_of_range("bad variable slot");
  const int group = (slot - 1) / kMaxDimension;
  const int i = (slot - 1) % kMaxDimension + 1;
  switch (group) {
    case 0: return y(i);
    case 1: return p(i);
    default: return q(i);
  }
}

int VarId::slot() const {
  switch (kind_) {
    case VarKind::X: return 0;
    case VarKind::Y: return index_;
    case VarKind::P: return kMaxDimension + index_;
    case VarKind::Q: return 2 * kMaxDimension + index_;
  }
  return 0;
}

std::string VarId::name() const {
  switch (kind_) {
    case VarKind::X: return "x";
    case VarKind::Y: return "y" + std::to_string(index_);
    case VarKind::P: return "p" + std::to_string(index_);
    case VarKind::Q: return "q" + std::to_string(index_);
  }
  return "?";
}

}  // namespace confgeo
