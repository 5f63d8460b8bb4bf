pub mod diagram;
pub mod rulebase;
