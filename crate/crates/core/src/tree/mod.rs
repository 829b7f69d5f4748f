//! Tree-based regressors: CART, random forest, gradient boosting, and
//! impurity-based feature importance.

mod boosting;
mod cart;
mod forest;
mod importance;

pub use boosting::{gbt_fit, GbtModel, GbtParams};
pub use cart::{tree_fit, Node, TreeModel, TreeParams};
pub use forest::{forest_fit, ForestModel, ForestParams, MaxFeatures};
pub use importance::feature_importance;
