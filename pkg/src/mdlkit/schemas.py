"""JSON schemas of the CLI outputs."""

_NUMBER = {"type": "number"}

SELECTION = {
    "type": "object",
    "required": ["candidates", "winner", "tie_break", "unit"],
    "properties": {
        "candidates": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["label", "rank"],
                "properties": {
                    "label": {"type": "string"},
                    "codelength_nats": _NUMBER,
                    "codelength_bits": _NUMBER,
                    "rank": {"type": "integer", "minimum": 1},
                    "weight": _NUMBER,
                },
            },
        },
        "winner": {"type": "string"},
        "tie_break": {"type": "string"},
        "unit": {"enum": ["nats", "bits"]},
    },
}

COMPLEXITY = {
    "type": "object",
    "required": ["n", "r", "method", "value", "unit"],
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "r": {"type": "integer", "minimum": 1},
        "method": {"type": "string"},
        "value": _NUMBER,
        "unit": {"enum": ["nats", "bits"]},
    },
}

BN = {
    "type": "object",
    "required": ["dag", "local_scores", "score", "score_name", "seed"],
    "properties": {
        "dag": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "string"}}},
        "local_scores": {"type": "object", "additionalProperties": _NUMBER},
        "score": _NUMBER,
        "score_name": {"enum": ["fnml", "qnml", "bdeu"]},
        "seed": {"type": "integer"},
        "orientation_scores": {"type": "object", "additionalProperties": _NUMBER},
    },
}

PREQ = {
    "type": "object",
    "required": ["n", "unit", "predictors"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "unit": {"enum": ["nats", "bits"]},
        "predictors": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["final_loss", "regret"],
                "properties": {"final_loss": _NUMBER, "regret": _NUMBER},
            },
        },
    },
}

TEST = {
    "type": "object",
    "required": ["D_nats", "ratio", "p_conservative", "decision"],
    "properties": {
        "D_nats": _NUMBER,
        "ratio": _NUMBER,
        "p_conservative": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "decision": {"enum": ["reject", "retain"]},
    },
}

SIMULATION = {
    "type": "object",
    "required": ["rate", "alpha", "trials", "n", "bound", "within_bound"],
    "properties": {
        "rate": {"type": "number", "minimum": 0, "maximum": 1},
        "alpha": {"type": "number", "minimum": 0, "maximum": 1},
        "trials": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 1},
        "bound": _NUMBER,
        "within_bound": {"type": "boolean"},
    },
}

SCHEMAS = {
    "complexity": COMPLEXITY,
    "select": SELECTION,
    "varsel": SELECTION,
    "markov": SELECTION,
    "bn": BN,
    "preq": PREQ,
    "test": TEST,
    "test-simulate": SIMULATION,
}
