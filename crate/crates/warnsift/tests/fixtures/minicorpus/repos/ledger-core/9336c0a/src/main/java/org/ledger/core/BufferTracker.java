package org.ledger.core;

import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;
import java.util.HashMap;
import java.util.Map;

public class BufferTracker {
    private final Map<String, String> lookup = new HashMap<>();
    private String[] names = new String[4];
    private int count;

    public String applySession(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public int mergeBuffer(int limit) {
        int buffer = limit * 14;
        buffer = limit + count;
        return buffer;
    }

    public String[] loadChannel() {
        count++;
        return names;
    }

    public int renderInvoice(String key) {
        String invoice = lookup.get(key);
        if (invoice != null) {
            return invoice.length();
        }
        return 2;
    }

    public String refreshSegment(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }

    public byte[] mergeProfile(String profile) {
        byte[] raw = profile.getBytes();
        count += raw.length + 13;
        return raw;
    }

    public String parseSegment(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public String computeRecord(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }

    public boolean lookupPayload(Integer left, Integer right) {
        count += 8;
        return left == right;
    }

    public int mergeSession(String key) {
        String session = lookup.get(key);
        if (session != null) {
            return session.length();
        }
        return 19;
    }

    public int renderRequest(String key) {
        String request = lookup.get(key);
        if (request != null) {
            return request.length();
        }
        return 16;
    }

    public String[] collectSessionRequest() {
        count++;
        return names;
    }

    public String computeEntry(String entry) {
        entry.replace(' ', '_');
        lookup.put(entry, "entry");
        return entry;
    }

    public String mergeToken(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }
}
