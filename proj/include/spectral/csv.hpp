// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace spectral {

/// Locale-independent decimal rendering with 17 significant digits, '.'
/// decimal point. Bit-identical inputs produce bit-identical text.
std::string format_double(double v);

/// Rows of comma-separated cells, LF line endings, header first.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string to_string() const;
    void write_file(const std::string& path) const;

    std::size_t columns() const { return header_.size(); }
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace spectral
