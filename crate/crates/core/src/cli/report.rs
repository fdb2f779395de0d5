//! Report documents: an ordered list of keys rendered either as `key: value`
//! lines or as one JSON object.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const TOOL: &str = concat!("starcode ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone)]
pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("tool".into(), TOOL.into());
        fields.insert("command".into(), command.into());
        Self { fields }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.into(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut out = serde_json::to_string_pretty(&self.fields).expect("plain JSON values");
            out.push('\n');
            return out;
        }
        let mut out = String::new();
        for (key, value) in &self.fields {
            let text = match value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{key}: {text}\n"));
        }
        out
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_order_is_insertion_order() {
        let mut r = Report::new("info");
        r.set("zeta", 1).set("alpha", true).set("list", vec![3, 1]);
        assert_eq!(
            r.render(false),
            format!("tool: {TOOL}\ncommand: info\nzeta: 1\nalpha: true\nlist: [3,1]\n")
        );
        let json: Value = serde_json::from_str(&r.render(true)).unwrap();
        let keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["tool", "command", "zeta", "alpha", "list"]);
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
