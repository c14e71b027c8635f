//! Normal forms and arithmetic in doubles `A *_B A`, generic over the
//! factor, with the free instance `G *_H G` and the finite instance
//! `Q *_P Q`.

mod element;
mod factor;
mod projection;

pub use element::{AmalgamElement, Double, Side};
pub use factor::{FactorContext, FiniteFactor, FreeFactor};
pub use projection::Projection;

use crate::freegroup::Word;

pub type FreeDouble = Double<FreeFactor>;
pub type FiniteDouble = Double<FiniteFactor>;
pub type FreeElement = AmalgamElement<Word>;
