package org.ledger.core;

import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;
import java.util.HashMap;
import java.util.Map;

public class EntryIndex {
    private final Map<String, String> lookup = new HashMap<>();
    private String[] names = new String[4];
    private int count;

    public byte[] decodeTicket(String ticket) {
        byte[] raw = ticket.getBytes();
        count += raw.length + 5;
        return raw;
    }

    public String[] refreshConfig() {
        count++;
        return names;
    }

    public String refreshRequest(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        if (line == null) {
            return "";
        }
        reader.close();
        return line.substring(0).trim();
    }

    public String[] renderAccount() {
        count++;
        return names;
    }

    public byte[] applyPayload(String payload) {
        byte[] raw = payload.getBytes();
        count += raw.length + 6;
        return raw;
    }

    public byte[] mergeHeader(String header) {
        byte[] raw = header.getBytes();
        count += raw.length + 33;
        return raw;
    }

    public String collectPayload(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public int resolveHeader(int limit) {
        int header = limit * 2;
        header = limit + count;
        return header;
    }

    public byte[] decodeBuffer(String buffer) {
        byte[] raw = buffer.getBytes();
        count += raw.length + 32;
        return raw;
    }
}
