"""Deterministic message-passing substrate for the lifecycle agents.

A cooperative single-threaded scheduler with explicit step(): exactly one
agent processes exactly one message per step, round-robin in registration
order. Messages carry FIPA-inspired performatives inside tracked
conversations, and the full trace is exportable as JSON-lines, which makes
protocol behaviour a plain golden-file test surface.

All bus mutations happen inside send()/step(); messages are immutable once
sent. Drive step() from one execution context at a time; trace snapshots
may be read at any time.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Callable

from .jsonio import dump_line


class RuntimeError_(Exception):
    """Base class for bus failures (the builtin name is taken)."""


class DuplicateName(RuntimeError_):
    pass


class UnknownReceiver(RuntimeError_):
    pass


class ProtocolViolation(RuntimeError_):
    pass


class BudgetExhausted(RuntimeError_):
    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(f"step budget exhausted after {steps} steps with work remaining")


class AgentRole(str, Enum):
    INSPECT = "inspect"
    RECOVER = "recover"
    REDESIGN = "redesign"
    DISPOSAL = "disposal"


class Performative(str, Enum):
    REQUEST = "request"
    AGREE = "agree"
    REFUSE = "refuse"
    INFORM = "inform"
    FAILURE = "failure"
    NOT_UNDERSTOOD = "not_understood"


# Performatives that discharge a pending reply. agree is an intermediate
# acknowledgement and leaves the request open.
TERMINAL_PERFORMATIVES = frozenset(
    {
        Performative.INFORM,
        Performative.REFUSE,
        Performative.FAILURE,
        Performative.NOT_UNDERSTOOD,
    }
)


class Topic(str, Enum):
    SOLUTION_REQUEST = "solution_request"
    SOLUTION_REPLY = "solution_reply"
    OUTCOME_REPORT = "outcome_report"


@dataclass(frozen=True)
class AgentId:
    name: str
    role: AgentRole


@dataclass(frozen=True)
class AclMessage:
    performative: Performative
    sender: AgentId
    receiver: AgentId
    conversation_id: str
    topic: Topic
    content: dict
    reply_with: str | None = None
    in_reply_to: str | None = None
    sequence: int = 0  # assigned by the bus on send


@dataclass
class Conversation:
    conversation_id: str
    initiator: AgentId
    participants: list[AgentId] = field(default_factory=list)
    state: str = "open"  # open | awaiting_replies | closed
    pending: set[str] = field(default_factory=set)
    # participant name -> refuse/failure/not_understood, when they ended that way
    outcomes: dict[str, str] = field(default_factory=dict)


Handler = Callable[["AgentSystem", AgentId, AclMessage], None]


def message_to_dict(msg: AclMessage) -> dict:
    return {
        "sequence": msg.sequence,
        "performative": msg.performative.value,
        "sender": {"name": msg.sender.name, "role": msg.sender.role.value},
        "receiver": {"name": msg.receiver.name, "role": msg.receiver.role.value},
        "conversation_id": msg.conversation_id,
        "topic": msg.topic.value,
        "content": msg.content,
        "reply_with": msg.reply_with,
        "in_reply_to": msg.in_reply_to,
    }


class AgentSystem:
    """Agent registry, mailboxes, and the round-robin scheduler."""

    def __init__(self):
        self._order: list[AgentId] = []
        self._handlers: dict[str, Handler] = {}
        self._mailboxes: dict[str, list[AclMessage]] = {}
        self._rr_index = 0
        self._next_sequence = 1
        self._next_conversation = 1
        self._next_reply_with = 1
        self.conversations: dict[str, Conversation] = {}
        self.trace: list[AclMessage] = []
        self.sent_counts: dict[str, int] = {}
        self.delivered_counts: dict[str, int] = {}
        # handler faults on messages that carried no reply_with; nothing to
        # send a failure at, so they are recorded here instead
        self.faults: list[tuple[AclMessage, str]] = []
        # reply_with -> (conversation_id, name of the agent expected to reply)
        self._issued: dict[str, tuple[str, str]] = {}
        self._terminal_replied: set[str] = set()

    # -- registry ----------------------------------------------------------

    def register(self, agent: AgentId, handler: Handler) -> None:
        if agent.name in self._handlers:
            raise DuplicateName(f"agent name {agent.name} already registered")
        self._order.append(agent)
        self._handlers[agent.name] = handler
        self._mailboxes[agent.name] = []
        self.sent_counts[agent.name] = 0
        self.delivered_counts[agent.name] = 0

    def agents(self) -> list[AgentId]:
        return list(self._order)

    def agent_by_role(self, role: AgentRole) -> AgentId:
        for agent in self._order:
            if agent.role is role:
                return agent
        raise UnknownReceiver(f"no agent registered for role {role.value}")

    # -- messaging ---------------------------------------------------------

    def fresh_conversation_id(self) -> str:
        cid = f"conv-{self._next_conversation:06d}"
        self._next_conversation += 1
        return cid

    def fresh_reply_with(self) -> str:
        rw = f"rw-{self._next_reply_with:06d}"
        self._next_reply_with += 1
        return rw

    def send(self, msg: AclMessage) -> AclMessage:
        """Validate, stamp with the next sequence number, and deliver to the mailbox."""
        if msg.receiver.name not in self._handlers:
            raise UnknownReceiver(f"receiver {msg.receiver.name} not registered")
        if msg.performative is not Performative.REQUEST:
            if msg.in_reply_to is None:
                raise ProtocolViolation(
                    f"{msg.performative.value} must carry in_reply_to"
                )
            issued = self._issued.get(msg.in_reply_to)
            if issued is None or issued[0] != msg.conversation_id:
                raise ProtocolViolation(
                    f"in_reply_to {msg.in_reply_to} does not match a prior reply_with "
                    f"in conversation {msg.conversation_id}"
                )
            if msg.performative in TERMINAL_PERFORMATIVES:
                if msg.in_reply_to in self._terminal_replied:
                    raise ProtocolViolation(
                        f"request {msg.in_reply_to} already answered"
                    )
                self._terminal_replied.add(msg.in_reply_to)

        stamped = replace(msg, sequence=self._next_sequence)
        self._next_sequence += 1
        self._track_conversation(stamped)
        self._mailboxes[stamped.receiver.name].append(stamped)
        self.sent_counts[stamped.receiver.name] += 1
        self.trace.append(stamped)
        return stamped

    def _track_conversation(self, msg: AclMessage) -> None:
        conv = self.conversations.get(msg.conversation_id)
        if conv is None:
            conv = Conversation(conversation_id=msg.conversation_id, initiator=msg.sender)
            self.conversations[msg.conversation_id] = conv
        for party in (msg.sender, msg.receiver):
            if party not in conv.participants:
                conv.participants.append(party)
        if msg.performative is Performative.REQUEST:
            if msg.reply_with is not None:
                self._issued[msg.reply_with] = (msg.conversation_id, msg.receiver.name)
                conv.pending.add(msg.receiver.name)
                conv.state = "awaiting_replies"
        elif msg.performative in TERMINAL_PERFORMATIVES:
            expected = self._issued.get(msg.in_reply_to, ("", ""))[1]
            if msg.sender.name == expected:
                conv.pending.discard(msg.sender.name)
                if msg.performative is not Performative.INFORM:
                    conv.outcomes[msg.sender.name] = msg.performative.value
                if conv.state == "awaiting_replies" and not conv.pending:
                    conv.state = "closed"

    def broadcast_request(
        self,
        initiator: AgentId,
        topic: Topic,
        content: dict,
        recipients: list[AgentId],
    ) -> str:
        """One request per recipient under a single fresh conversation."""
        if not recipients:
            raise ProtocolViolation("broadcast_request needs at least one recipient")
        for recipient in recipients:
            if recipient.name not in self._handlers:
                raise UnknownReceiver(f"receiver {recipient.name} not registered")
        cid = self.fresh_conversation_id()
        for recipient in recipients:
            self.send(
                AclMessage(
                    performative=Performative.REQUEST,
                    sender=initiator,
                    receiver=recipient,
                    conversation_id=cid,
                    topic=topic,
                    content=content,
                    reply_with=self.fresh_reply_with(),
                )
            )
        return cid

    def reply(
        self,
        to: AclMessage,
        sender: AgentId,
        performative: Performative,
        content: dict,
        topic: Topic | None = None,
    ) -> AclMessage:
        """Convenience for answering a request within its conversation."""
        return self.send(
            AclMessage(
                performative=performative,
                sender=sender,
                receiver=to.sender,
                conversation_id=to.conversation_id,
                topic=topic if topic is not None else to.topic,
                content=content,
                in_reply_to=to.reply_with,
            )
        )

    # -- scheduling --------------------------------------------------------

    def step(self) -> bool:
        """Let the next agent with mail process exactly one message.

        Handler exceptions never escape: they turn into a failure message
        back to the sender when the faulting message expected a reply.
        """
        if not self._order:
            return False
        n = len(self._order)
        for offset in range(n):
            idx = (self._rr_index + offset) % n
            agent = self._order[idx]
            mailbox = self._mailboxes[agent.name]
            if not mailbox:
                continue
            msg = mailbox.pop(0)
            self._rr_index = (idx + 1) % n
            self.delivered_counts[agent.name] += 1
            try:
                self._handlers[agent.name](self, agent, msg)
            except Exception as exc:  # noqa: BLE001 - fault isolation is the contract
                if msg.reply_with is not None and msg.reply_with not in self._terminal_replied:
                    try:
                        self.reply(
                            msg,
                            sender=agent,
                            performative=Performative.FAILURE,
                            content={"error": str(exc)},
                        )
                    except RuntimeError_:
                        self.faults.append((msg, str(exc)))
                else:
                    self.faults.append((msg, str(exc)))
            return True
        return False

    def run_until_idle(self, max_steps: int = 10_000) -> int:
        """Step until all mailboxes drain; BudgetExhausted signals a livelock."""
        if max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        steps = 0
        while steps < max_steps:
            if not self.step():
                return steps
            steps += 1
        if any(self._mailboxes[a.name] for a in self._order):
            raise BudgetExhausted(steps)
        return steps

    def mailbox_size(self, agent: AgentId) -> int:
        return len(self._mailboxes[agent.name])

    # -- trace -------------------------------------------------------------

    def trace_lines(self) -> list[str]:
        return [dump_line(message_to_dict(m)) for m in self.trace]

    def export_trace(self, path: str | Path) -> None:
        text = "".join(line + "\n" for line in self.trace_lines())
        Path(path).write_text(text, encoding="utf-8")


def verify_trace(messages: list[AclMessage]) -> list[str]:
    """Bus-level conformance monitor over a full message trace.

    Returns human-readable violations; an empty list means the trace is
    protocol-conformant.
    """
    violations: list[str] = []
    last_seq = 0
    # reply_with -> conversation it was issued in
    issued: dict[str, str] = {}
    terminal_seen: dict[str, int] = {}
    for msg in messages:
        if msg.sequence <= last_seq:
            violations.append(
                f"sequence {msg.sequence} not increasing after {last_seq}"
            )
        last_seq = msg.sequence
        if msg.performative is Performative.REQUEST:
            if msg.reply_with is not None:
                issued[msg.reply_with] = msg.conversation_id
            continue
        if msg.in_reply_to is None:
            violations.append(f"message {msg.sequence}: {msg.performative.value} without in_reply_to")
            continue
        if issued.get(msg.in_reply_to) != msg.conversation_id:
            violations.append(
                f"message {msg.sequence}: in_reply_to {msg.in_reply_to} does not resolve "
                f"within conversation {msg.conversation_id}"
            )
        if msg.performative in TERMINAL_PERFORMATIVES:
            terminal_seen[msg.in_reply_to] = terminal_seen.get(msg.in_reply_to, 0) + 1
            if terminal_seen[msg.in_reply_to] > 1:
                violations.append(
                    f"message {msg.sequence}: request {msg.in_reply_to} answered twice"
                )
    return violations
