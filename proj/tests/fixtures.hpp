#pragma once

#include "pathcalc/path.hpp"

namespace fixtures {

// step path {(0,0),(1,0.6),(2,0.4),(3,1.3)}
inline pathcalc::Path p1() {
    return pathcalc::Path::scalar(3.0, {0, 1, 2, 3}, {0.0, 0.6, 0.4, 1.3});
}

// oscillator 0,1,0,1,0 on integer times
inline pathcalc::Path p2() {
    return pathcalc::Path::scalar(4.0, {0, 1, 2, 3, 4}, {0, 1, 0, 1, 0});
}

inline pathcalc::Path constant(double v = 0.0, double T = 1.0) {
    return pathcalc::Path::scalar(T, {0.0}, {v});
}

}  // namespace fixtures
