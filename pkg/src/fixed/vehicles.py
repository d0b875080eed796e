"""Vehicle types, dwell times and on-board seat bookkeeping shared by FIX and FLEX."""

from dataclasses import dataclass, field
from typing import List, Optional


DWELL_INTERCEPT = 5.14
DWELL_PER_BOARDING = 3.48
DWELL_PER_ALIGHTING = 1.70


@dataclass(frozen=True)
class VehicleType:
    """Vehicle capacity (total passengers) and seated capacity."""

    id: str
    capacity: int
    seats: int

    def __post_init__(self):
        if not 0 < self.seats <= self.capacity:
            raise ValueError(f"vehicle type {self.id}: need 0 < seats <= capacity")


def dwell_time(n_board: int, n_alight: int) -> float:
    """Stop dwell time in seconds, linear in boardings and alightings."""
    if n_board < 0 or n_alight < 0:
        raise ValueError("boarding/alighting counts must be >= 0")
    return DWELL_INTERCEPT + DWELL_PER_BOARDING * n_board + DWELL_PER_ALIGHTING * n_alight


@dataclass
class OnboardPassenger:
    traveler_id: str
    boarded_at: float
    boarded_stop: str
    order: int
    seated: bool = False
    alight_stop: Optional[str] = None


@dataclass
class Cabin:
    """Passengers on board one vehicle with seat assignment.

    Boarders sit while seats remain. Standees move to vacated seats at the
    next stop, in boarding order.
    """

    vehicle_type: VehicleType
    passengers: List[OnboardPassenger] = field(default_factory=list)
    _boarding_counter: int = 0

    @property
    def load(self) -> int:
        return len(self.passengers)

    @property
    def seated(self) -> int:
        return sum(1 for p in self.passengers if p.seated)

    @property
    def has_room(self) -> bool:
        return self.load < self.vehicle_type.capacity

    @property
    def load_factor(self) -> float:
        return self.load / self.vehicle_type.seats

    def board(self, traveler_id: str, now: float, stop_id: str,
              alight_stop: Optional[str] = None) -> OnboardPassenger:
        if not self.has_room:
            raise OverflowError(f"vehicle full ({self.vehicle_type.capacity})")
        passenger = OnboardPassenger(
            traveler_id=traveler_id,
            boarded_at=now,
            boarded_stop=stop_id,
            order=self._boarding_counter,
            seated=self.seated < self.vehicle_type.seats,
            alight_stop=alight_stop,
        )
        self._boarding_counter += 1
        self.passengers.append(passenger)
        return passenger

    def alight_at(self, stop_id: str, force_all: bool = False) -> List[OnboardPassenger]:
        leaving = [p for p in self.passengers if force_all or p.alight_stop == stop_id]
        if leaving:
            self.passengers = [p for p in self.passengers if not (force_all or p.alight_stop == stop_id)]
        return leaving

    def reseat(self):
        free = self.vehicle_type.seats - self.seated
        if free <= 0:
            return
        for passenger in sorted(self.passengers, key=lambda p: p.order):
            if free == 0:
                break
            if not passenger.seated:
                passenger.seated = True
                free -= 1
