#pragma once

// Published barrier valuations for alpha=2, c1=4, c2=3, lambda=1, q=0.1,
// kept as fixtures for the `table` command and the acceptance suite.

#include <array>
#include <optional>
#include <vector>

namespace twodiv {

struct ReferenceCell {
    double a, b, u1, u2;
    double published;
};

struct ReferenceTable {
    int id = 0;
    const char* source = "";
    std::vector<ReferenceCell> cells;  ///< row-major in the published layout
    double argmax_a = 0.0;             ///< published optimum (tables 1 and 2 only)
    double argmax_b = 0.0;
};

inline constexpr std::array<double, 4> kTableA{0.1, 0.2, 0.5, 1.0};
inline constexpr std::array<double, 6> kTableB{6, 8, 14, 15, 20, 28};

inline ReferenceTable reference_table(int id) {
    ReferenceTable t;
    t.id = id;
    if (id == 1 || id == 2) {
        static constexpr double v1[4][6] = {{19.85, 27.20, 34.95, 34.93, 32.48, 25.89},
                                            {16.33, 24.31, 33.82, 34.19, 33.32, 28.03},
                                            {11.76, 17.74, 28.98, 30.01, 32.54, 31.21},
                                            {7.22, 11.40, 21.35, 22.59, 27.17, 30.07}};
        static constexpr double v2[4][6] = {{19.07, 27.42, 36.51, 36.58, 34.21, 27.34},
                                            {17.17, 24.34, 35.22, 35.69, 35.01, 29.55},
                                            {10.94, 17.50, 29.93, 31.07, 33.99, 32.78},
                                            {6.59, 11.07, 21.86, 23.21, 28.19, 31.43}};
        const auto& v = id == 1 ? v1 : v2;
        const double u1 = id == 1 ? 1.0 : 2.0, u2 = id == 1 ? 2.0 : 3.0;
        t.source = id == 1 ? "Table 1, (u1,u2)=(1,2)" : "Table 2, (u1,u2)=(2,3)";
        for (std::size_t i = 0; i < kTableA.size(); ++i)
            for (std::size_t j = 0; j < kTableB.size(); ++j)
                t.cells.push_back({kTableA[i], kTableB[j], u1, u2, v[i][j]});
        t.argmax_a = 0.1;
        t.argmax_b = id == 1 ? 14.0 : 15.0;
    } else if (id == 3) {
        t.source = "Table 3, a=0.9, b=1.8";
        static constexpr double u2s[6] = {0.2, 0.4, 0.6, 0.8, 0.9, 1.2};
        static constexpr double u1s[6] = {0.0, 0.1, 0.2, 0.4, 0.7, 0.8};
        constexpr double no = -1.0;
        static constexpr double v3[6][6] = {{2.09, 1.58, 1.11, 0.69, 0.49, 0.03},
                                            {2.35, 1.81, 1.31, 0.86, 0.65, 0.13},
                                            {no, 2.06, 1.53, 1.09, 0.82, 0.25},
                                            {no, no, 1.98, 1.45, 1.20, 0.53},
                                            {no, no, no, 2.11, 1.83, no},
                                            {no, no, no, no, 2.07, no}};
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                if (v3[i][j] >= 0.0) t.cells.push_back({0.9, 1.8, u1s[i], u2s[j], v3[i][j]});
    }
    return t;
}

}  // namespace twodiv
