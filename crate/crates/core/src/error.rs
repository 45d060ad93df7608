use thiserror::Error;

use crate::sft::Word;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("alphabet size {0} is too small (need at least 2 symbols)")]
    AlphabetTooSmall(usize),
    #[error("entry ({row},{col}) = {value} is not 0 or 1")]
    NotBinary { row: usize, col: usize, value: i64 },
    #[error("symbol {0} has an all-zero row (no successor)")]
    ZeroRow(usize),
    #[error("symbol {0} has an all-zero column (no predecessor)")]
    ZeroColumn(usize),
    #[error("symbol {symbol} is outside the alphabet 1..={n}")]
    SymbolOutOfRange { symbol: usize, n: usize },
    #[error("word [{0}] is not admissible")]
    Inadmissible(Word),
    #[error("empty word where a nonempty word is required")]
    EmptyWord,
    #[error("point is not admissible: {0}")]
    BadPoint(String),
    #[error("word of length {len} is too short: need at least {needed}")]
    WordTooShort { len: usize, needed: usize },
    #[error("function table has depth {0}; depth must be at least 1")]
    BadDepth(usize),
    #[error("function table is missing word [{0}]")]
    MissingWord(Word),
    #[error("function table has entry for [{0}], which is not an admissible word of the table depth")]
    ExtraWord(Word),
    #[error("function takes value {value} on [{word}], but must be {expected}")]
    BadValue {
        word: Word,
        value: i64,
        expected: &'static str,
    },
    #[error("block code maps [{word}] to symbol {symbol}, outside the target alphabet 1..={n}")]
    BadBlockSymbol { word: Word, symbol: usize, n: usize },
    #[error("block code sends admissible [{0}] to an inadmissible image")]
    BlockCodeNotSliding(Word),
    #[error("prefix replacement rules are invalid: {0}")]
    BadRules(String),
    #[error("orbit equivalence identity fails on cylinder [{0}]")]
    OrbitIdentityFails(Word),
    #[error("set H is empty")]
    EmptySet,
    #[error("H is not saturated: the cycle [{0}] avoids H")]
    NotSaturated(Word),
    #[error("not a coboundary: the cycle [{cycle}] has sum {sum}")]
    NotCoboundary { cycle: Word, sum: i64 },
    #[error("no consistent potential: edge [{0}] contradicts the spanning tree")]
    InconsistentPotential(Word),
    #[error("cycle enumeration exceeded the cap of {0} cycles")]
    CycleLimit(usize),
    #[error("matrix is reducible")]
    Reducible,
    #[error("power iteration did not converge")]
    NoConvergence,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("window contains no symbols to decode")]
    EmptyWindow,
    #[error("invalid input: {0}")]
    Invalid(String),
}
