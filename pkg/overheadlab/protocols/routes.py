"""Routing table (single best entry) and route cache (several full paths)."""
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Set, Tuple


@dataclass
class RouteEntry:
    destination: int
    next_hop: int
    hop_count: int
    expiry: float
    dest_seq: int = 0
    valid: bool = True
    path: Optional[Tuple[int, ...]] = None
    established: bool = False
    # time the route was last learned or confirmed
    learned: float = 0.0
    # origins whose data was forwarded over this entry
    origins: Set[int] = field(default_factory=set)

    def sort_key(self) -> tuple:
        return (self.hop_count, self.next_hop, self.path or ())

    def preference_key(self) -> tuple:
        """Shortest first, the most recently learned among equally short."""
        return (self.hop_count, -self.learned, self.next_hop, self.path or ())

    def route_key(self) -> tuple:
        return self.path if self.path is not None else (self.next_hop,)

    def uses_link(self, a: int, b: int) -> bool:
        path = self.path or ()
        for first, second in zip(path, path[1:]):
            if (first, second) in ((a, b), (b, a)):
                return True
        return False


class RouteTable:
    """Routes known by one node, keyed by destination.

    In single mode a destination has at most one entry, replaced only by a
    fresher or shorter one. In multi mode up to cache_size distinct paths are
    kept per destination and broken ones are removed instead of invalidated.
    Expired entries are deleted on access.
    """

    def __init__(self, owner: int, multi: bool = False, cache_size: int = 8) -> None:
        self.owner = owner
        self.multi = multi
        self.cache_size = cache_size
        self._entries: Dict[int, List[RouteEntry]] = {}

    def __iter__(self) -> Iterator[RouteEntry]:
        for destination in sorted(self._entries):
            yield from self._entries[destination]

    def __len__(self) -> int:
        return sum(len(entries) for entries in self._entries.values())

    def _purge(self, destination: int, now: float) -> List[RouteEntry]:
        entries = [
            entry for entry in self._entries.get(destination, ()) if entry.expiry > now
        ]
        if entries:
            self._entries[destination] = entries
        else:
            self._entries.pop(destination, None)
        return entries

    def purge(self, now: float) -> None:
        for destination in list(self._entries):
            self._purge(destination, now)

    def lookup(
        self, destination: int, now: float, exclude: Tuple[int, ...] = ()
    ) -> Optional[RouteEntry]:
        """Best valid entry for destination, skipping routes through exclude."""
        candidates = [
            entry
            for entry in self._purge(destination, now)
            if entry.valid
            and entry.next_hop not in exclude
            and not set(exclude) & set(entry.path or ())
        ]
        if not candidates:
            return None
        return min(candidates, key=RouteEntry.preference_key)

    def get(self, destination: int, now: float) -> Optional[RouteEntry]:
        """Entry for destination including invalid ones, single mode only."""
        entries = self._purge(destination, now)
        return entries[0] if entries else None

    def known_seq(self, destination: int) -> int:
        return max(
            (entry.dest_seq for entry in self._entries.get(destination, ())), default=0
        )

    def has_next_hop(self, next_hop: int, now: float) -> bool:
        return any(
            entry.valid and entry.expiry > now and entry.next_hop == next_hop
            for entry in self
        )

    def offer(self, entry: RouteEntry, now: float) -> bool:
        """Add entry if it improves on what is known. Returns True when stored."""
        entries = self._purge(entry.destination, now)
        if self.multi:
            return self._offer_multi(entry, entries)
        existing = entries[0] if entries else None
        if existing is None or self._is_better(entry, existing):
            if existing and existing.route_key() == entry.route_key():
                entry.origins |= existing.origins
            self._entries[entry.destination] = [entry]
            return True
        if (
            existing.route_key() == entry.route_key()
            and existing.hop_count == entry.hop_count
            and existing.dest_seq == entry.dest_seq
        ):
            existing.expiry = max(existing.expiry, entry.expiry)
            existing.valid = True
            existing.established = existing.established or entry.established
            existing.learned = max(existing.learned, entry.learned)
            return True
        return False

    def _offer_multi(self, entry: RouteEntry, entries: List[RouteEntry]) -> bool:
        for existing in entries:
            if existing.route_key() == entry.route_key():
                existing.expiry = max(existing.expiry, entry.expiry)
                existing.valid = True
                existing.established = existing.established or entry.established
                existing.dest_seq = max(existing.dest_seq, entry.dest_seq)
                existing.learned = max(existing.learned, entry.learned)
                return True
        entries = sorted(entries + [entry], key=RouteEntry.sort_key)[: self.cache_size]
        self._entries[entry.destination] = entries
        return entry in entries

    @staticmethod
    def _is_better(new: RouteEntry, old: RouteEntry) -> bool:
        if not old.valid:
            return new.dest_seq >= old.dest_seq
        if new.dest_seq != old.dest_seq:
            return new.dest_seq > old.dest_seq
        return (new.hop_count, new.next_hop) < (old.hop_count, old.next_hop)

    def refresh(self, destination: int, now: float, lifetime: float) -> None:
        entry = self.lookup(destination, now)
        if entry:
            entry.expiry = max(entry.expiry, now + lifetime)

    def _break(self, broken) -> List[RouteEntry]:
        affected = []
        for destination in sorted(self._entries):
            entries = self._entries[destination]
            hit = [entry for entry in entries if entry.valid and broken(entry)]
            if not hit:
                continue
            if self.multi:
                remaining = [entry for entry in entries if entry not in hit]
                if remaining:
                    self._entries[destination] = remaining
                else:
                    del self._entries[destination]
            else:
                for entry in hit:
                    entry.valid = False
                    entry.dest_seq += 1
            affected.extend(hit)
        return affected

    def invalidate_next_hop(self, next_hop: int) -> List[RouteEntry]:
        """Invalidate (single) or remove (multi) every route via next_hop."""
        return self._break(lambda entry: entry.next_hop == next_hop)

    def remove_link(self, a: int, b: int) -> List[RouteEntry]:
        """Break every route that traverses the link between a and b."""

        def uses(entry: RouteEntry) -> bool:
            if entry.path is not None:
                return entry.uses_link(a, b)
            return (self.owner, entry.next_hop) in ((a, b), (b, a))

        return self._break(uses)
