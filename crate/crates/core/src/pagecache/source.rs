//! Backing stores the page cache reads from.

use std::fs::File;
use std::io;
use std::sync::Arc;

/// Positional, read-only byte source.
pub trait PageSource: Send + Sync {
    fn len(&self) -> u64;

    /// Reads up to `buf.len()` bytes at `offset`; returns the count read.
    /// A count below `buf.len()` means end of data.
    fn read_at(&self, buf: &mut [u8], offset: u64) -> io::Result<usize>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl PageSource for Vec<u8> {
    fn len(&self) -> u64 {
        self.as_slice().len() as u64
    }

    fn read_at(&self, buf: &mut [u8], offset: u64) -> io::Result<usize> {
        read_slice(self, buf, offset)
    }
}

impl PageSource for Arc<[u8]> {
    fn len(&self) -> u64 {
        <[u8]>::len(self) as u64
    }

    fn read_at(&self, buf: &mut [u8], offset: u64) -> io::Result<usize> {
        read_slice(self, buf, offset)
    }
}

fn read_slice(data: &[u8], buf: &mut [u8], offset: u64) -> io::Result<usize> {
    let start = usize::try_from(offset)
        .unwrap_or(usize::MAX)
        .min(data.len());
    let n = buf.len().min(data.len() - start);
    buf[..n].copy_from_slice(&data[start..start + n]);
    Ok(n)
}

/// A read-only file accessed with positional reads.
#[derive(Debug)]
pub struct FileSource {
    #[cfg(not(unix))]
    file: parking_lot::Mutex<File>,
    #[cfg(unix)]
    file: File,
    len: u64,
}

impl FileSource {
    pub fn new(file: File) -> io::Result<Self> {
        let len = file.metadata()?.len();
        #[cfg(not(unix))]
        let file = parking_lot::Mutex::new(file);
        Ok(FileSource { file, len })
    }

    pub fn open(path: &std::path::Path) -> io::Result<Self> {
        Self::new(File::open(path)?)
    }
}

impl PageSource for FileSource {
    fn len(&self) -> u64 {
        self.len
    }

    #[cfg(unix)]
    fn read_at(&self, buf: &mut [u8], offset: u64) -> io::Result<usize> {
        use std::os::unix::fs::FileExt;
        let mut done = 0;
        while done < buf.len() {
            match self.file.read_at(&mut buf[done..], offset + done as u64) {
                Ok(0) => break,
                Ok(n) => done += n,
                Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
                Err(e) => return Err(e),
            }
        }
        Ok(done)
    }

    #[cfg(not(unix))]
    fn read_at(&self, buf: &mut [u8], offset: u64) -> io::Result<usize> {
        use std::io::{Read, Seek, SeekFrom};
        let mut file = self.file.lock();
        file.seek(SeekFrom::Start(offset))?;
        let mut done = 0;
        while done < buf.len() {
            match file.read(&mut buf[done..]) {
                Ok(0) => break,
                Ok(n) => done += n,
                Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
                Err(e) => return Err(e),
            }
        }
        Ok(done)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_reads_stop_at_end() {
        let data: Vec<u8> = (0..10).collect();
        let mut buf = [0u8; 4];
        assert_eq!(data.read_at(&mut buf, 8).unwrap(), 2);
        assert_eq!(&buf[..2], &[8, 9]);
        assert_eq!(data.read_at(&mut buf, 20).unwrap(), 0);
    }

    #[test]
    fn file_reads_match_contents() {
        use std::io::Write;
        let mut tmp = tempfile::tempfile().unwrap();
        tmp.write_all(&(0u8..=255).collect::<Vec<_>>()).unwrap();
        let src = FileSource::new(tmp).unwrap();
        assert_eq!(src.len(), 256);
        let mut buf = [0u8; 3];
        assert_eq!(src.read_at(&mut buf, 254).unwrap(), 2);
        assert_eq!(&buf[..2], &[254, 255]);
    }
}
