#pragma once

#include "hcm/errors.hpp"
#include "hcm/extpower.hpp"
#include "hcm/stmodule.hpp"

#include <optional>
#include <string>

namespace hcm {

// Named modules: sphere, Z, o, o:0, o:1, o:4, d2-o, tensor-o, d2-sphere, d2-z.
// For the sphere and Z, `top` bounds the window.
inline GradedModule builtin_module(const std::string& name, std::optional<int> n, int top = 20)
{
    auto need = [&]() {
        if (!n)
            throw InputError("builtin module '" + name + "' needs n");
        return *n;
    };
    if (name == "sphere")
        return sphere_module(top);
    if (name == "Z")
        return z_module(top);
    if (name == "o")
        return o_module(need());
    if (name == "o:0" || name == "o:1" || name == "o:4") {
        int k = need();
        if (((k % 8) + 8) % 8 != name[2] - '0')
            throw InputError("builtin module '" + name + "' needs n = " + name.substr(2) + " mod 8");
        return o_module(k);
    }
    if (name == "d2-o") {
        int k = need();
        return d2_homology(o_module(k), 2 * k - 2, 2 * k + 1);
    }
    if (name == "tensor-o") {
        int k = need();
        auto o = o_module(k);
        return tensor(o, o, 2 * k - 2, 2 * k);
    }
    if (name == "d2-sphere") {
        int c = need();
        return d2_sphere(c, 2 * c, 2 * c + 3);
    }
    if (name == "d2-z") {
        int c = need();
        return d2_sigma_z(c, 2 * c, 2 * c + 3);
    }
    throw InputError("unknown builtin module '" + name + "'");
}

}  // namespace hcm
