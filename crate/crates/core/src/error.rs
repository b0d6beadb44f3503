use thiserror::Error;

/// Errors raised while building or querying a [`RibbonGraph`](crate::RibbonGraph).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge name `{0}`")]
    DuplicateEdge(String),
    #[error("half-edge {0} appears more than once in the rotations")]
    DuplicateHalfEdge(usize),
    #[error("unknown half-edge {0}")]
    UnknownHalfEdge(usize),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("pairing is not a fixed-point-free involution at half-edge {half_edge} ({reason})")]
    BadInvolution { half_edge: usize, reason: &'static str },
    #[error("edge `{edge}` is a loop at vertex `{vertex}`")]
    LoopEdge { edge: String, vertex: String },
    #[error("graph is disconnected: vertex `{0}` is unreachable from the first vertex")]
    Disconnected(String),
    #[error("edge `{edge}` is not incident to vertex `{vertex}`")]
    NotIncident { edge: String, vertex: String },
    #[error("vertex `{0}` is not on the cycle")]
    NotOnCycle(String),
    #[error("edge `{0}` belongs to the cycle")]
    EdgeInCycle(String),
    #[error("deleting edge `{0}` would disconnect the graph")]
    WouldDisconnect(String),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
}

/// A parse failure in the line-oriented ribbon graph format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    Build {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("{0}")]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("divisor has {found} coefficients but the graph has {expected} vertices")]
    WrongLength { expected: usize, found: usize },
    #[error("expected a divisor of degree {expected}, found degree {found}")]
    WrongDegree { expected: i64, found: i64 },
    #[error("no break divisor is equivalent to {0}")]
    NotFound(String),
    #[error("{count} distinct break divisors are equivalent to {divisor}")]
    NonUnique { divisor: String, count: usize },
    #[error("cannot parse divisor literal `{0}`")]
    Literal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("no spanning tree contains the required edges and avoids the forbidden ones: {0}")]
    Infeasible(String),
    #[error("edge set is not a spanning tree: {0}")]
    NotATree(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RotorError {
    #[error("chip is already at the sink `{0}`")]
    AtSink(String),
    #[error("vertex `{0}` carries no rotor")]
    MissingRotor(String),
    #[error("rotor routing did not reach the sink within {0} steps")]
    StepBudgetExceeded(usize),
    #[error("final rotor configuration is not a spanning tree")]
    NotATree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("witness pair is not proper")]
    NotProper,
    #[error("no endpoint of the witness path has its cycle edges adjacent in the rotation ({intervening} intervening edges)")]
    PrecedenceFails { intervening: usize },
    #[error("the component reached by the intervening edge `{0}` meets neither the cycle nor the path")]
    ComponentDisjoint(String),
    #[error("rerouting produced no valid proper witness pair")]
    RerouteFailed,
    #[error("construction not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog graph `{0}`")]
    UnknownName(String),
    #[error("calibration failed for `{0}`: no rotation system satisfies the worked-example claims")]
    CalibrationFailed(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
