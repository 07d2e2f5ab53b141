// partition_io.hpp - partition file format
//
// A partition file is a JSON object:
//   {"format": "fairpart-partition", "version": 1,
//    "n": <nodes>, "k": <parts>, "eps": <balance slack>,
//    "assignment": [<part of node 0>, <part of node 1>, ...]}
// "eps" records the balance regime the partition was built for (0 = balanced).
#pragma once

#include <string>

#include <json.hpp>

#include "fairpart/errors.hpp"
#include "fairpart/partition.hpp"

namespace fairpart {

struct PartitionFile {
    Partition partition;
    double eps = 0.0;

    friend bool operator==(const PartitionFile&, const PartitionFile&) = default;
};

inline nlohmann::json partition_to_json(const Partition& x, double eps = 0.0) {
    nlohmann::json doc;
    doc["format"] = "fairpart-partition";
    doc["version"] = 1;
    doc["n"] = x.n();
    doc["k"] = x.k();
    doc["eps"] = eps;
    doc["assignment"] = std::vector<PartId>(x.assignment().begin(), x.assignment().end());
    return doc;
}

inline std::string serialize_partition(const Partition& x, double eps = 0.0) {
    return partition_to_json(x, eps).dump() + "\n";
}

inline PartitionFile parse_partition(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, std::string("partition file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError(0, "partition file must be a JSON object");
    if (doc.contains("format") && doc["format"] != "fairpart-partition")
        throw ParseError(0, "unexpected format tag");
    for (const char* key : {"n", "k", "assignment"})
        if (!doc.contains(key)) throw ParseError(0, std::string("missing field '") + key + "'");
    if (!doc["n"].is_number_unsigned() || !doc["k"].is_number_unsigned())
        throw ParseError(0, "n and k must be non-negative integers");
    if (!doc["assignment"].is_array()) throw ParseError(0, "assignment must be a list");
    const auto n = doc["n"].get<std::size_t>();
    const auto k = doc["k"].get<std::size_t>();
    const auto& list = doc["assignment"];
    if (list.size() != n)
        throw ParseError(0, "assignment has " + std::to_string(list.size()) +
                                " entries but n=" + std::to_string(n));
    std::vector<PartId> assign;
    assign.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!list[i].is_number_unsigned())
            throw ParseError(0, "assignment entry " + std::to_string(i) + " is not a part id");
        const auto part = list[i].get<std::uint64_t>();
        if (part >= k)
            throw ParseError(0, "assignment entry " + std::to_string(i) + " = " +
                                    std::to_string(part) + " is not below k=" + std::to_string(k));
        assign.push_back(static_cast<PartId>(part));
    }
    PartitionFile file;
    file.eps = doc.value("eps", 0.0);
    try {
        file.partition = Partition(k, std::move(assign));
    } catch (const DomainError& e) {
        throw ParseError(0, e.what());
    }
    return file;
}

}  // namespace fairpart
