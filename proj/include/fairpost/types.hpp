#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fairpost {

using GroupId = std::uint32_t;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A conditioning event Pr{A=a, Y=y} carries zero mass; the rate formulas
/// downstream presuppose these conditionals exist.
class EmptyGroupOutcomeError : public Error {
public:
    EmptyGroupOutcomeError(GroupId group, int outcome, const std::string& context = {})
        : Error("empty (group, outcome) cell: group=" + std::to_string(group) +
                " outcome=" + std::to_string(outcome) +
                (context.empty() ? "" : " [" + context + "]")),
          group(group), outcome(outcome) {}
    GroupId group;
    int outcome;
};

class NegativeWeightError : public Error {
public:
    explicit NegativeWeightError(double w)
        : Error("sample weight must be >= 0, got " + std::to_string(w)) {}
};

class NonFiniteScoreError : public Error {
public:
    NonFiniteScoreError() : Error("sample score must be finite") {}
};

class UnknownGroupError : public Error {
public:
    explicit UnknownGroupError(GroupId group)
        : Error("group id out of range: " + std::to_string(group)) {}
};

class DegenerateLossError : public Error {
public:
    DegenerateLossError() : Error("loss specification has both costs zero") {}
};

class InfeasibleTargetError : public Error {
public:
    InfeasibleTargetError(double fpr, double tpr)
        : Error("target rate point (" + std::to_string(fpr) + ", " + std::to_string(tpr) +
                ") lies outside the achievable region") {}
};

class StructureMismatchError : public Error {
public:
    explicit StructureMismatchError(const std::string& what)
        : Error("distribution structure mismatch: " + what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("parse error at line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};

/// (false positive rate, true positive rate) of a predictor within one group.
struct RatePoint {
    double fpr = 0.0;
    double tpr = 0.0;

    friend bool operator==(const RatePoint&, const RatePoint&) = default;
};

/// Misclassification costs; correct predictions cost nothing.
struct LossSpec {
    double cost_fp = 1.0;  // predicting 1 when the outcome is 0
    double cost_fn = 1.0;  // predicting 0 when the outcome is 1

    void validate() const {
        if (cost_fp < 0.0 || cost_fn < 0.0)
            throw Error("loss costs must be nonnegative");
        if (cost_fp == 0.0 && cost_fn == 0.0)
            throw DegenerateLossError();
    }
};

}  // namespace fairpost
