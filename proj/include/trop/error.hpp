#pragma once

#include <stdexcept>
#include <string>

namespace trop {

enum class Err {
    // model / curve validation
    InvalidModel,
    EmptyGraph,
    DisconnectedGraph,
    InfiniteNonLeafEdge,
    MissingInfiniteEnd,
    // point lookups
    PointNotOnCurve,
    PointAtInfinity,
    // extended arithmetic
    UndefinedInfinitySum,
    BadRational,
    // rational functions
    PlusInfinityConstant,
    CurveMismatch,
    InvertBottom,
    BottomFunction,
    InvalidFunction,
    BadProbeGeometry,
    // subgraphs / chip-firing
    EmptySubgraph,
    IsolatedInfinityComponent,
    InvalidSubgraph,
    NotAPointAtInfinity,
    PointNotOnTailEdge,
    // expansive maps / morphisms
    NotBijective,
    FactorViolated,
    InfinityNotPreserved,
    InvalidMap,
    NotHarmonic,
    LoopyModel,
    NotStarInfinite,
    // semiring-isomorphism recovery
    NonConstantImageOfConstant,
    NonPositiveFactor,
    ProbeDivergence,
    ValenceMismatch,
    ArgmaxAtInfinity,
    MultipleInfinitePoles,
    // front end
    ParseError,
    Usage,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::InvalidModel: return "InvalidModel";
        case Err::EmptyGraph: return "EmptyGraph";
        case Err::DisconnectedGraph: return "DisconnectedGraph";
        case Err::InfiniteNonLeafEdge: return "InfiniteNonLeafEdge";
        case Err::MissingInfiniteEnd: return "MissingInfiniteEnd";
        case Err::PointNotOnCurve: return "PointNotOnCurve";
        case Err::PointAtInfinity: return "PointAtInfinity";
        case Err::UndefinedInfinitySum: return "UndefinedInfinitySum";
        case Err::BadRational: return "BadRational";
        case Err::PlusInfinityConstant: return "PlusInfinityConstant";
        case Err::CurveMismatch: return "CurveMismatch";
        case Err::InvertBottom: return "InvertBottom";
        case Err::BottomFunction: return "BottomFunction";
        case Err::InvalidFunction: return "InvalidFunction";
        case Err::BadProbeGeometry: return "BadProbeGeometry";
        case Err::EmptySubgraph: return "EmptySubgraph";
        case Err::IsolatedInfinityComponent: return "IsolatedInfinityComponent";
        case Err::InvalidSubgraph: return "InvalidSubgraph";
        case Err::NotAPointAtInfinity: return "NotAPointAtInfinity";
        case Err::PointNotOnTailEdge: return "PointNotOnTailEdge";
        case Err::NotBijective: return "NotBijective";
        case Err::FactorViolated: return "FactorViolated";
        case Err::InfinityNotPreserved: return "InfinityNotPreserved";
        case Err::InvalidMap: return "InvalidMap";
        case Err::NotHarmonic: return "NotHarmonic";
        case Err::LoopyModel: return "LoopyModel";
        case Err::NotStarInfinite: return "NotStarInfinite";
        case Err::NonConstantImageOfConstant: return "NonConstantImageOfConstant";
        case Err::NonPositiveFactor: return "NonPositiveFactor";
        case Err::ProbeDivergence: return "ProbeDivergence";
        case Err::ValenceMismatch: return "ValenceMismatch";
        case Err::ArgmaxAtInfinity: return "ArgmaxAtInfinity";
        case Err::MultipleInfinitePoles: return "MultipleInfinitePoles";
        case Err::ParseError: return "ParseError";
        case Err::Usage: return "Usage";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Err code, std::string message)
        : std::runtime_error(std::string(err_name(code)) + ": " + message), code_(code) {}

    Err code() const { return code_; }
    const char* code_name() const { return err_name(code_); }

private:
    Err code_;
};

// NotHarmonic carries the violated clause (1)-(4) of the morphism conditions.
class NotHarmonicError : public Error {
public:
    NotHarmonicError(int clause, std::string message)
        : Error(Err::NotHarmonic, "clause (" + std::to_string(clause) + "): " + message),
          clause_(clause) {}

    int clause() const { return clause_; }

private:
    int clause_;
};

}  // namespace trop
