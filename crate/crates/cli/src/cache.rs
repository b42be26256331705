//! Content-addressed results cache: one JSON file per `(command, config)`
//! pair, keyed by the config hash. A hit replays the stored records, so
//! cached reruns emit byte-identical outputs.

use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Serialize};

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(out_dir: &Path) -> std::io::Result<Cache> {
        let dir = out_dir.join("cache");
        std::fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    fn path(&self, command: &str, hash: &str) -> PathBuf {
        self.dir.join(format!("{command}-{hash}.json"))
    }

    pub fn load<T: DeserializeOwned>(&self, command: &str, hash: &str) -> Option<T> {
        let bytes = std::fs::read(self.path(command, hash)).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    pub fn store<T: Serialize>(&self, command: &str, hash: &str, value: &T) -> std::io::Result<()> {
        std::fs::write(
            self.path(command, hash),
            serde_json::to_vec_pretty(value).unwrap(),
        )
    }
}
