// Shared error types and the uniqueness verdict enum.
#pragma once

#include <stdexcept>
#include <string>

namespace mrf {

// Thrown when a documented operation precondition is violated by the caller.
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when an operation is invoked in a regime its contract excludes
// (e.g. asking for limiting probabilities in the non-uniqueness regime).
struct contract_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Thrown when randomized graph generation exhausts its attempt budget.
struct generation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class verdict { unique, non_unique, undetermined };

inline const char* to_string(verdict v) {
    switch (v) {
        case verdict::unique: return "Unique";
        case verdict::non_unique: return "NonUnique";
        default: return "Undetermined";
    }
}

inline verdict verdict_from_string(const std::string& s) {
    if (s == "Unique") return verdict::unique;
    if (s == "NonUnique") return verdict::non_unique;
    if (s == "Undetermined") return verdict::undetermined;
    throw std::invalid_argument("unknown verdict string: " + s);
}

}  // namespace mrf
