//! Content-addressed on-disk store for orbit and Hall tables.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hallq::hall::HallTable;
use hallq::repspace::OrbitTable;
use hallq::{DimVector, TableStore};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope {
    format_version: u32,
    checksum: String,
    payload: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub struct DiskStore {
    dir: PathBuf,
    /// Canonical quiver text and `q`, shared by every key.
    prefix: String,
}

impl DiskStore {
    pub fn new(dir: &Path, canonical_quiver: &str, q: u64) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(DiskStore { dir: dir.to_path_buf(), prefix: format!("{canonical_quiver}\nq={q}\n") })
    }

    pub fn key(&self, kind: &str, dims: &[&DimVector]) -> String {
        let dims: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
        sha256_hex(format!("{}{kind}:{}\nv{FORMAT_VERSION}", self.prefix, dims.join("|")).as_bytes())
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn write<T: Serialize>(&self, key: &str, value: &T) -> std::io::Result<()> {
        let payload = serde_json::to_string(value)?;
        let env = Envelope { format_version: FORMAT_VERSION, checksum: sha256_hex(payload.as_bytes()), payload };
        let target = self.path(key);
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(&env)?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)
    }

    /// `None` on a miss; corrupt or mismatching entries are logged and
    /// treated as misses.
    pub fn read<T: for<'de> Deserialize<'de>>(&self, key: &str) -> Option<T> {
        let path = self.path(key);
        let text = fs::read_to_string(&path).ok()?;
        let env: Envelope = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {}: {e}", path.display());
                return None;
            }
        };
        if env.format_version != FORMAT_VERSION || sha256_hex(env.payload.as_bytes()) != env.checksum {
            log::warn!("checksum mismatch in cache entry {}; recomputing", path.display());
            return None;
        }
        match serde_json::from_str(&env.payload) {
            Ok(v) => Some(v),
            Err(e) => {
                log::warn!("ignoring undecodable cache entry {}: {e}", path.display());
                None
            }
        }
    }

    fn save<T: Serialize>(&self, key: &str, value: &T) {
        if let Err(e) = self.write(key, value) {
            log::warn!("could not write cache entry {key}: {e}");
        }
    }
}

impl TableStore for DiskStore {
    fn load_orbit_table(&self, dim: &DimVector) -> Option<OrbitTable> {
        self.read(&self.key("orbits", &[dim]))
    }

    fn save_orbit_table(&self, table: &OrbitTable) {
        self.save(&self.key("orbits", &[&table.dim]), table);
    }

    fn load_hall_table(&self, quotient: &DimVector, sub: &DimVector) -> Option<HallTable> {
        self.read(&self.key("hall", &[quotient, sub]))
    }

    fn save_hall_table(&self, table: &HallTable) {
        self.save(&self.key("hall", &[table.quotient_dim(), table.sub_dim()]), table);
    }
}
