use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::Mutex;

use super::merge::{merge, IoRequest, MergePolicy};
use super::source::PageSource;
use super::view::PageSpan;
use super::{CacheError, IoStats};
use crate::store::Side;

pub const DEFAULT_PAGE_SIZE: u64 = 4096;
pub const DEFAULT_ASSOCIATIVITY: u32 = 8;
pub const MIN_PAGE_SIZE: u64 = 512;
pub const MAX_PAGE_SIZE: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheConfig {
    pub capacity_pages: u64,
    /// Pages per hash slot; eviction never crosses slots.
    pub associativity: u32,
    pub page_size: u64,
}

impl Default for CacheConfig {
    fn default() -> Self {
        CacheConfig {
            capacity_pages: 1024,
            associativity: DEFAULT_ASSOCIATIVITY,
            page_size: DEFAULT_PAGE_SIZE,
        }
    }
}

impl CacheConfig {
    pub fn new(
        capacity_pages: u64,
        associativity: u32,
        page_size: u64,
    ) -> Result<Self, CacheError> {
        let config = CacheConfig {
            capacity_pages,
            associativity,
            page_size,
        };
        config.validate()?;
        Ok(config)
    }

    /// A config holding `capacity_pages` pages of `page_size` bytes, with the
    /// default associativity clamped to the capacity.
    pub fn with_capacity(capacity_pages: u64, page_size: u64) -> Self {
        let associativity = u64::from(DEFAULT_ASSOCIATIVITY).min(capacity_pages.max(1)) as u32;
        CacheConfig {
            capacity_pages,
            associativity,
            page_size,
        }
    }

    pub fn validate(&self) -> Result<(), CacheError> {
        if !self.page_size.is_power_of_two()
            || !(MIN_PAGE_SIZE..=MAX_PAGE_SIZE).contains(&self.page_size)
        {
            return Err(CacheError::Config(format!(
                "page size {} must be a power of two in [{MIN_PAGE_SIZE}, {MAX_PAGE_SIZE}]",
                self.page_size
            )));
        }
        if self.associativity == 0 || self.capacity_pages < u64::from(self.associativity) {
            return Err(CacheError::Config(format!(
                "need capacity_pages ({}) >= associativity ({}) >= 1",
                self.capacity_pages, self.associativity
            )));
        }
        Ok(())
    }
}

/// One cached page. The bytes stay valid for as long as the handle lives,
/// even after eviction.
#[derive(Debug, Clone)]
pub struct Page {
    pub page_no: u64,
    pub bytes: Arc<[u8]>,
}

struct Entry {
    page_no: u64,
    data: Arc<[u8]>,
    last_used: u64,
}

struct Slot {
    entries: Vec<Entry>,
    capacity: usize,
    tick: u64,
}

impl Slot {
    fn get(&mut self, page_no: u64) -> Option<Arc<[u8]>> {
        self.tick += 1;
        let tick = self.tick;
        self.entries
            .iter_mut()
            .find(|e| e.page_no == page_no)
            .map(|e| {
                e.last_used = tick;
                e.data.clone()
            })
    }

    fn insert(&mut self, page_no: u64, data: Arc<[u8]>) -> Arc<[u8]> {
        self.tick += 1;
        let tick = self.tick;
        if let Some(e) = self.entries.iter_mut().find(|e| e.page_no == page_no) {
            // another thread filled it first
            e.last_used = tick;
            return e.data.clone();
        }
        let entry = Entry {
            page_no,
            data: data.clone(),
            last_used: tick,
        };
        if self.entries.len() < self.capacity {
            self.entries.push(entry);
        } else {
            let victim = self
                .entries
                .iter()
                .enumerate()
                .min_by_key(|(_, e)| e.last_used)
                .map(|(i, _)| i)
                .expect("slot capacity is at least one");
            self.entries[victim] = entry;
        }
        data
    }
}

#[derive(Default)]
struct Counters {
    requests_submitted: AtomicU64,
    requests_issued_to_file: AtomicU64,
    merged_requests: AtomicU64,
    pages_read: AtomicU64,
    cache_hits: AtomicU64,
    cache_misses: AtomicU64,
    in_bytes_requested: AtomicU64,
    out_bytes_requested: AtomicU64,
}

/// Set-associative page cache over a read-only [`PageSource`].
pub struct PageCache {
    source: Arc<dyn PageSource>,
    config: CacheConfig,
    policy: MergePolicy,
    slots: Box<[Mutex<Slot>]>,
    counters: Counters,
}

impl std::fmt::Debug for PageCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PageCache")
            .field("config", &self.config)
            .field("policy", &self.policy)
            .field("slots", &self.slots.len())
            .finish()
    }
}

impl PageCache {
    pub fn new(
        source: Arc<dyn PageSource>,
        config: CacheConfig,
        policy: MergePolicy,
    ) -> Result<Self, CacheError> {
        config.validate()?;
        let num_slots = (config.capacity_pages / u64::from(config.associativity)).max(1);
        let base = config.capacity_pages / num_slots;
        let extra = config.capacity_pages % num_slots;
        let slots = (0..num_slots)
            .map(|i| {
                let capacity = (base + u64::from(i < extra)) as usize;
                Mutex::new(Slot {
                    entries: Vec::with_capacity(capacity.min(64)),
                    capacity,
                    tick: 0,
                })
            })
            .collect();
        Ok(PageCache {
            source,
            config,
            policy,
            slots,
            counters: Counters::default(),
        })
    }

    pub fn config(&self) -> &CacheConfig {
        &self.config
    }

    pub fn policy(&self) -> MergePolicy {
        self.policy
    }

    pub fn source_len(&self) -> u64 {
        self.source.len()
    }

    pub fn stats(&self) -> IoStats {
        let c = &self.counters;
        let pages_read = c.pages_read.load(Ordering::Relaxed);
        IoStats {
            requests_submitted: c.requests_submitted.load(Ordering::Relaxed),
            requests_issued_to_file: c.requests_issued_to_file.load(Ordering::Relaxed),
            merged_requests: c.merged_requests.load(Ordering::Relaxed),
            pages_read,
            cache_hits: c.cache_hits.load(Ordering::Relaxed),
            cache_misses: c.cache_misses.load(Ordering::Relaxed),
            bytes_read: pages_read * self.config.page_size,
            in_bytes_requested: c.in_bytes_requested.load(Ordering::Relaxed),
            out_bytes_requested: c.out_bytes_requested.load(Ordering::Relaxed),
        }
    }

    #[inline]
    fn slot(&self, page_no: u64) -> &Mutex<Slot> {
        &self.slots[(page_no % self.slots.len() as u64) as usize]
    }

    fn lookup(&self, page_no: u64) -> Option<Arc<[u8]>> {
        let hit = self.slot(page_no).lock().get(page_no);
        let counter = if hit.is_some() {
            &self.counters.cache_hits
        } else {
            &self.counters.cache_misses
        };
        counter.fetch_add(1, Ordering::Relaxed);
        hit
    }

    /// Reads `count` pages starting at `first` with one file read and caches them.
    fn fetch_run(&self, first: u64, count: u64) -> Result<Vec<Arc<[u8]>>, CacheError> {
        let page = self.config.page_size;
        let offset = first * page;
        if offset >= self.source.len() {
            return Err(CacheError::OutOfBounds {
                offset,
                len: count * page,
                file_len: self.source.len(),
            });
        }
        let mut buf = vec![0u8; (count * page) as usize];
        self.counters
            .requests_issued_to_file
            .fetch_add(1, Ordering::Relaxed);
        let got = self
            .source
            .read_at(&mut buf, offset)
            .map_err(|e| CacheError::Io {
                offset,
                len: count * page,
                source: Arc::new(e),
            })?;
        // Only the tail of the file may come back short; the rest stays zeroed.
        let expected = (self.source.len() - offset).min(buf.len() as u64) as usize;
        if got < expected {
            return Err(CacheError::ShortRead {
                offset,
                expected: expected as u64,
                got: got as u64,
            });
        }
        self.counters.pages_read.fetch_add(count, Ordering::Relaxed);
        Ok(buf
            .chunks_exact(page as usize)
            .enumerate()
            .map(|(i, chunk)| {
                self.slot(first + i as u64)
                    .lock()
                    .insert(first + i as u64, Arc::from(chunk))
            })
            .collect())
    }

    /// Returns page `page_no`, reading and caching it on a miss.
    pub fn read_through(&self, page_no: u64) -> Result<Page, CacheError> {
        if let Some(bytes) = self.lookup(page_no) {
            return Ok(Page { page_no, bytes });
        }
        let mut pages = self.fetch_run(page_no, 1)?;
        Ok(Page {
            page_no,
            bytes: pages.pop().expect("one page fetched"),
        })
    }

    /// Resolves every request and hands each one, with a view of its bytes,
    /// to `on_complete` exactly once.
    ///
    /// Requests are sorted by offset unless `sorted_hint` is set and the
    /// batch is already in order, merged under the cache's [`MergePolicy`],
    /// served from cached pages where possible, and the remaining pages are
    /// read in one file request per contiguous run of missing pages.
    /// Completions run on the calling thread in offset order.
    pub fn submit_batch<T, F>(
        &self,
        mut requests: Vec<IoRequest<T>>,
        sorted_hint: bool,
        mut on_complete: F,
    ) where
        F: FnMut(IoRequest<T>, Result<PageSpan<'_>, CacheError>),
    {
        let c = &self.counters;
        c.requests_submitted
            .fetch_add(requests.len() as u64, Ordering::Relaxed);
        for r in &requests {
            let counter = match r.side {
                Side::In => &c.in_bytes_requested,
                Side::Out => &c.out_bytes_requested,
            };
            counter.fetch_add(r.len, Ordering::Relaxed);
        }
        if !(sorted_hint && requests.is_sorted_by_key(|r| r.offset)) {
            requests.sort_by_key(|r| r.offset);
        }

        let file_len = self.source.len();
        let (valid, invalid): (Vec<_>, Vec<_>) = requests.into_iter().partition(|r| {
            r.offset
                .checked_add(r.len)
                .is_some_and(|end| end <= file_len)
        });
        for r in invalid {
            let err = CacheError::OutOfBounds {
                offset: r.offset,
                len: r.len,
                file_len,
            };
            on_complete(r, Err(err));
        }

        let page = self.config.page_size;
        let merged = merge(valid, page, self.policy).expect("requests were sorted above");
        c.merged_requests
            .fetch_add(merged.len() as u64, Ordering::Relaxed);
        let mut pages: Vec<Option<Arc<[u8]>>> = Vec::new();
        for run in merged {
            pages.clear();
            pages.extend((run.first_page..=run.last_page()).map(|p| self.lookup(p)));

            let mut failure = None;
            let mut i = 0;
            while i < pages.len() && failure.is_none() {
                if pages[i].is_some() {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < pages.len() && pages[i].is_none() {
                    i += 1;
                }
                match self.fetch_run(run.first_page + start as u64, (i - start) as u64) {
                    Ok(fetched) => {
                        for (slot, data) in pages[start..i].iter_mut().zip(fetched) {
                            *slot = Some(data);
                        }
                    }
                    Err(e) => failure = Some(e),
                }
            }

            if let Some(err) = failure {
                for member in run.members {
                    on_complete(member, Err(err.clone()));
                }
                continue;
            }
            let resident: Vec<Arc<[u8]>> = pages
                .drain(..)
                .map(|p| p.expect("every page resident"))
                .collect();
            let base = run.first_page * page;
            for member in run.members {
                let (first, last) = member.pages(page);
                let lo = (first - run.first_page) as usize;
                let hi = (last - run.first_page) as usize + 1;
                let start = (member.offset - base - lo as u64 * page) as usize;
                let span = PageSpan::new(&resident[lo..hi], start, member.len as usize);
                on_complete(member, Ok(span));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::VecDeque;

    fn data(len: usize) -> Arc<dyn PageSource> {
        Arc::new((0..len).map(|i| (i * 7 % 251) as u8).collect::<Vec<u8>>())
    }

    fn cache(len: usize, capacity: u64, assoc: u32, page: u64) -> PageCache {
        PageCache::new(
            data(len),
            CacheConfig::new(capacity, assoc, page).unwrap(),
            MergePolicy::default(),
        )
        .unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(CacheConfig::new(8, 8, 4096).is_ok());
        assert!(CacheConfig::new(4, 8, 4096).is_err());
        assert!(CacheConfig::new(8, 0, 4096).is_err());
        assert!(CacheConfig::new(8, 8, 3000).is_err());
        assert!(CacheConfig::new(8, 8, 256).is_err());
        assert_eq!(CacheConfig::with_capacity(3, 4096).associativity, 3);
    }

    #[test]
    fn second_scan_hits_when_everything_fits() {
        let c = cache(20 * 512, 24, 8, 512);
        for p in 0..20 {
            c.read_through(p).unwrap();
        }
        let before = c.stats();
        assert_eq!(before.cache_misses, 20);
        for p in 0..20 {
            c.read_through(p).unwrap();
        }
        let after = c.stats();
        assert_eq!(after.cache_misses, 20);
        assert_eq!(after.cache_hits, 20);
    }

    #[test]
    fn single_page_cache_thrashes() {
        let c = cache(4 * 512, 1, 1, 512);
        for i in 0..10 {
            c.read_through(i % 2).unwrap();
        }
        let s = c.stats();
        assert_eq!(s.cache_misses, 10);
        assert_eq!(s.cache_hits, 0);
        assert_eq!(s.pages_read, 10);
    }

    #[test]
    fn pages_match_source_bytes() {
        let src = data(3000);
        let c = PageCache::new(
            src.clone(),
            CacheConfig::new(2, 1, 512).unwrap(),
            MergePolicy::default(),
        )
        .unwrap();
        for p in [0u64, 5, 1, 5, 2, 0] {
            let page = c.read_through(p).unwrap();
            let mut expected = vec![0u8; 512];
            let n = src.read_at(&mut expected, p * 512).unwrap();
            assert_eq!(&page.bytes[..n], &expected[..n]);
            assert!(page.bytes[n..].iter().all(|&b| b == 0));
        }
        assert!(matches!(
            c.read_through(6),
            Err(CacheError::OutOfBounds { .. })
        ));
    }

    /// Fully associative LRU used as the reference model.
    fn reference_lru(trace: &[u64], capacity: usize) -> (u64, u64) {
        let mut lru: VecDeque<u64> = VecDeque::new();
        let (mut hits, mut misses) = (0, 0);
        for &p in trace {
            if let Some(pos) = lru.iter().position(|&q| q == p) {
                hits += 1;
                lru.remove(pos);
            } else {
                misses += 1;
                if lru.len() == capacity {
                    lru.pop_front();
                }
            }
            lru.push_back(p);
        }
        (hits, misses)
    }

    #[test]
    fn hit_rate_matches_reference_lru() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let trace: Vec<u64> = (0..5000).map(|_| rng.random_range(0..40u64)).collect();
        for capacity in [1u64, 4, 16, 39] {
            let c = cache(40 * 512, capacity, capacity as u32, 512);
            for &p in &trace {
                c.read_through(p).unwrap();
            }
            let s = c.stats();
            let (hits, misses) = reference_lru(&trace, capacity as usize);
            assert_eq!(
                (s.cache_hits, s.cache_misses),
                (hits, misses),
                "capacity {capacity}"
            );
            let touches = trace.len() as f64;
            let hit_rate = s.cache_hits as f64 / touches;
            assert!((hit_rate - (1.0 - s.pages_read as f64 / touches)).abs() < 1e-12);
        }
    }

    #[test]
    fn eviction_stays_inside_slot() {
        // 2 slots of 2 pages: even pages never evict odd ones.
        let c = cache(16 * 512, 4, 2, 512);
        c.read_through(1).unwrap();
        for p in [0, 2, 4, 6, 8] {
            c.read_through(p).unwrap();
        }
        let misses = c.stats().cache_misses;
        c.read_through(1).unwrap();
        assert_eq!(c.stats().cache_misses, misses);
    }

    fn request(offset: u64, len: u64, task: usize) -> IoRequest<usize> {
        IoRequest {
            target: task as u32,
            side: Side::Out,
            offset,
            len,
            task,
        }
    }

    #[test]
    fn batch_completes_each_request_once_with_exact_bytes() {
        let src = data(64 * 512);
        let reqs: Vec<_> = [(10u64, 30u64), (500, 40), (3000, 2000), (9000, 8), (40, 8)]
            .iter()
            .enumerate()
            .map(|(i, &(o, l))| request(o, l, i))
            .collect();
        for policy in [MergePolicy::default(), MergePolicy::disabled()] {
            let c =
                PageCache::new(src.clone(), CacheConfig::new(8, 2, 512).unwrap(), policy).unwrap();
            let mut seen = vec![0; reqs.len()];
            c.submit_batch(reqs.clone(), false, |req, view| {
                let view = view.unwrap();
                let mut expected = vec![0u8; req.len as usize];
                src.read_at(&mut expected, req.offset).unwrap();
                assert_eq!(view.to_vec(), expected);
                seen[req.task] += 1;
            });
            assert_eq!(seen, vec![1; reqs.len()]);
        }
    }

    #[test]
    fn merging_issues_fewer_reads() {
        let src = data(64 * 512);
        let reqs: Vec<_> = (0..40).map(|i| request(i * 300, 100, i as usize)).collect();
        let issued = |policy| {
            let c =
                PageCache::new(src.clone(), CacheConfig::new(64, 8, 512).unwrap(), policy).unwrap();
            c.submit_batch(reqs.clone(), true, |_, v| assert!(v.is_ok()));
            c.stats()
        };
        let on = issued(MergePolicy::default());
        let off = issued(MergePolicy::disabled());
        assert_eq!(on.requests_issued_to_file, 1);
        assert!(on.requests_issued_to_file <= off.requests_issued_to_file);
        assert_eq!(on.pages_read, off.pages_read);
        assert_eq!(on.cache_hits + on.cache_misses, 24);
    }

    #[test]
    fn out_of_range_request_gets_error() {
        let c = cache(1024, 4, 2, 512);
        let mut outcomes = Vec::new();
        c.submit_batch(
            vec![request(1000, 100, 0), request(0, 8, 1)],
            false,
            |req, view| {
                outcomes.push((req.task, view.is_ok()));
            },
        );
        outcomes.sort();
        assert_eq!(outcomes, vec![(0, false), (1, true)]);
    }

    struct FailingSource;
    impl PageSource for FailingSource {
        fn len(&self) -> u64 {
            4096
        }
        fn read_at(&self, _: &mut [u8], _: u64) -> std::io::Result<usize> {
            Err(std::io::Error::other("device gone"))
        }
    }

    #[test]
    fn io_failure_reaches_every_member() {
        let c = PageCache::new(
            Arc::new(FailingSource),
            CacheConfig::new(4, 1, 512).unwrap(),
            MergePolicy::default(),
        )
        .unwrap();
        let mut errors = 0;
        c.submit_batch(
            vec![request(0, 8, 0), request(16, 8, 1)],
            true,
            |_, view| {
                assert!(matches!(view, Err(CacheError::Io { .. })));
                errors += 1;
            },
        );
        assert_eq!(errors, 2);
    }

    #[test]
    fn concurrent_readers_see_file_bytes() {
        let src = data(128 * 512);
        let c = PageCache::new(
            src.clone(),
            CacheConfig::new(16, 4, 512).unwrap(),
            MergePolicy::default(),
        )
        .unwrap();
        std::thread::scope(|s| {
            for t in 0..4u64 {
                let c = &c;
                let src = &src;
                s.spawn(move || {
                    for i in 0..500u64 {
                        let p = (i * 13 + t * 7) % 128;
                        let page = c.read_through(p).unwrap();
                        let mut expected = vec![0u8; 512];
                        src.read_at(&mut expected, p * 512).unwrap();
                        assert_eq!(&page.bytes[..], &expected[..]);
                    }
                });
            }
        });
        let s = c.stats();
        assert_eq!(s.cache_hits + s.cache_misses, 2000);
    }
}
