#pragma once

#include <optional>

#include "tileregu/error.hpp"

template <class F>
std::optional<tileregu::ErrorKind> kind_of(F&& f) {
    try {
        f();
    } catch (const tileregu::Error& e) {
        return e.kind();
    }
    return std::nullopt;
}
