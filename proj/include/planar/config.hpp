#pragma once

#include <string>
#include <vector>

#include "planar/rational.hpp"
#include "planar/words.hpp"

namespace planar {

/// Finite rectangular window of a configuration over a small alphabet.
/// Cells are characters; binary configurations use '0' and '1'.
struct Configuration {
    long row0 = 0, col0 = 0;
    std::vector<std::string> rows;  // equal widths, row index grows upward from row0

    long height() const { return static_cast<long>(rows.size()); }
    long width() const { return rows.empty() ? 0 : static_cast<long>(rows[0].size()); }

    char at(long r, long c) const {
        if (r < row0 || r >= row0 + height() || c < col0 || c >= col0 + width())
            throw error("Configuration: index outside window");
        return rows[static_cast<size_t>(r - row0)][static_cast<size_t>(c - col0)];
    }

    void check_rectangular() const {
        for (const auto& r : rows)
            if (static_cast<long>(r.size()) != width()) throw error("Configuration: ragged rows");
    }

    /// Row m as a binary word (requires a {0,1} alphabet).
    BinaryWord row_word(long m) const {
        const std::string& s = rows[static_cast<size_t>(m - row0)];
        return BinaryWord::from_string(s, col0);
    }

    std::string str() const {
        std::string out;
        for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
            out += *it;
            out += '\n';
        }
        return out;
    }

    static Configuration from_rows(std::vector<std::string> rs, long row0 = 0, long col0 = 0) {
        Configuration c;
        c.rows = std::move(rs);
        c.row0 = row0;
        c.col0 = col0;
        c.check_rectangular();
        return c;
    }

    bool operator==(const Configuration& o) const = default;
};

}  // namespace planar
