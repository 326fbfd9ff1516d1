pub mod catalog;
pub mod coeffode;
pub mod exprparse;
pub mod symexpr;
pub mod vectorfield;
pub mod vlasov;
