#pragma once

#include <stdexcept>
#include <string>

namespace windpar {

/// Base class of every error raised by the library. `category()` is the
/// stable name printed by the CLI (e.g. "StructureError").
class Error : public std::runtime_error {
public:
  Error(std::string category, const std::string &what)
      : std::runtime_error(category + ": " + what), category_(std::move(category)) {}

  const std::string &category() const noexcept { return category_; }

private:
  std::string category_;
};

#define WINDPAR_DEFINE_ERROR(Name)                                                                 \
  class Name : public Error {                                                                      \
  public:                                                                                          \
    explicit Name(const std::string &what) : Error(#Name, what) {}                                 \
  }

// codec
WINDPAR_DEFINE_ERROR(SyntaxError);
WINDPAR_DEFINE_ERROR(StructureError);
WINDPAR_DEFINE_ERROR(MarkError);
// diagram analyses
WINDPAR_DEFINE_ERROR(UnknownCrossing);
// moves
WINDPAR_DEFINE_ERROR(NotApplicable);
WINDPAR_DEFINE_ERROR(Stuck);
WINDPAR_DEFINE_ERROR(MalformedTrace);
// abelian
WINDPAR_DEFINE_ERROR(DimensionMismatch);
WINDPAR_DEFINE_ERROR(GroupMismatch);
// parity
WINDPAR_DEFINE_ERROR(BadModulus);
WINDPAR_DEFINE_ERROR(NonzeroFixedElement);
WINDPAR_DEFINE_ERROR(NotHomological);
WINDPAR_DEFINE_ERROR(UnknownParityKind);
// universal
WINDPAR_DEFINE_ERROR(IncompatibleGroups);

#undef WINDPAR_DEFINE_ERROR

} // namespace windpar
