#include "srrd/features.hpp"

#include <string>

namespace srrd {

std::string_view to_string(FunctionKind kind) {
    switch (kind) {
        case FunctionKind::linear: return "linear";
        case FunctionKind::polynomial: return "polynomial";
        case FunctionKind::sinusoidal: return "sinusoidal";
        case FunctionKind::random: return "random";
    }
    return "?";
}

FunctionKind parse_function_kind(std::string_view name) {
    if (name == "linear") return FunctionKind::linear;
    if (name == "polynomial") return FunctionKind::polynomial;
    if (name == "sinusoidal") return FunctionKind::sinusoidal;
    if (name == "random") return FunctionKind::random;
    throw Error("unknown function kind `" + std::string(name) + "`");
}

}  // namespace srrd
