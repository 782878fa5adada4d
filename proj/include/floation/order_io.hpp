#pragma once

#include <filesystem>
#include <optional>

#include "json.hpp"

#include "floation/orders.hpp"

namespace flo {

struct OrderContext {
    std::optional<GeneratorSet> generators;  // names for user-table words
    std::vector<Word> relators;             // used by surface_lex when the file gives none
    int precision_bits = 2048;
};

/// Order document: {"backend": "zn"|"surface_lex"|"user_table", "field": ..., ...}.
/// Coefficients are numbers, rational strings ("3/2") or power-basis arrays.
OrderOracle parse_order(const nlohmann::json& doc, const OrderContext& ctx = {});
OrderOracle load_order_file(const std::filesystem::path& path, const OrderContext& ctx = {});

FieldPtr parse_field(const nlohmann::json& spec, int precision_bits = 2048);
AlgebraicNumber parse_coefficient(const nlohmann::json& v, const FieldPtr& field);

nlohmann::json describe_order(const OrderOracle& o);
nlohmann::json to_json(const AlgebraicNumber& a);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace flo
