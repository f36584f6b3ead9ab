#include "xlproj/wordalign.hpp"

namespace xlproj {

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::kForward: return "forward";
    case Direction::kBackward: return "backward";
    case Direction::kBoth: return "both";
  }
  return "?";
}

}  // namespace xlproj
